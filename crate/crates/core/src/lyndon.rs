//! Lyndon words, Lyndon tuples over a letter multiset, and their parity census.
//!
//! Letters are `1..=l`. A tuple's index is `|M|` minus its number of words.

use std::fmt;

use itertools::Itertools;

/// A word strictly smaller than each of its nontrivial rotations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord(Vec<u8>);

impl LyndonWord {
    pub fn new(letters: Vec<u8>) -> Option<Self> {
        is_lyndon(&letters).then_some(LyndonWord(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub fn is_lyndon(word: &[u8]) -> bool {
    !word.is_empty() && (1..word.len()).all(|r| word < &[&word[r..], &word[..r]].concat()[..])
}

/// All Lyndon words over `{1..l}` of length at most `max_len`, in
/// lexicographic order (Fredricksen–Kessler–Maiorana / Duval generation).
pub fn lyndon_words(l: u8, max_len: usize) -> Vec<LyndonWord> {
    let mut out = Vec::new();
    if l == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    while !w.is_empty() {
        *w.last_mut().expect("non-empty") += 1;
        out.push(LyndonWord(w.clone()));
        let period = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - period]);
        }
        while w.last() == Some(&l) {
            w.pop();
        }
    }
    out
}

/// Letter multiset `[1^{m_1}, ..., l^{m_l}]`; `counts[i]` is the multiplicity
/// of letter `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LetterMultiset {
    counts: Vec<usize>,
}

impl LetterMultiset {
    pub fn new(counts: Vec<usize>) -> Self {
        LetterMultiset { counts }
    }

    pub fn from_letters(letters: &[u8]) -> Self {
        let l = letters.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0; l];
        for &c in letters {
            counts[c as usize - 1] += 1;
        }
        LetterMultiset { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    /// `|M|`.
    pub fn size(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn distinct_letters(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    fn content_of(&self, word: &[u8]) -> Option<Vec<usize>> {
        let mut counts = vec![0; self.counts.len()];
        for &c in word {
            *counts.get_mut(c as usize - 1)? += 1;
        }
        Some(counts)
    }
}

impl fmt::Display for LetterMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| if c == 1 { format!("{}", i + 1) } else { format!("{}^{}", i + 1, c) })
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A set of distinct Lyndon words, listed in decreasing lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LyndonTuple {
    pub words: Vec<LyndonWord>,
}

impl LyndonTuple {
    /// `|M| - k` for a tuple of `k` words.
    pub fn index(&self) -> usize {
        self.words.iter().map(LyndonWord::len).sum::<usize>() - self.words.len()
    }

    pub fn is_odd(&self) -> bool {
        self.index() % 2 == 1
    }

    fn concatenation(&self) -> Vec<u8> {
        self.words.iter().flat_map(|w| w.0.iter().copied()).collect()
    }
}

impl fmt::Display for LyndonTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.words {
            write!(f, "({w})")?;
        }
        Ok(())
    }
}

/// Every set of distinct Lyndon words whose combined letter content is `m`,
/// ordered by the concatenation of their words.
pub fn lyndon_tuples(m: &LetterMultiset) -> Vec<LyndonTuple> {
    let size = m.size();
    if size == 0 {
        return Vec::new();
    }
    let candidates: Vec<(LyndonWord, Vec<usize>)> = lyndon_words(m.alphabet_size() as u8, size)
        .into_iter()
        .filter_map(|w| {
            let c = m.content_of(&w.0)?;
            c.iter().zip(&m.counts).all(|(a, b)| a <= b).then_some((w, c))
        })
        .collect();

    fn search(
        candidates: &[(LyndonWord, Vec<usize>)],
        from: usize,
        remaining: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<LyndonTuple>,
    ) {
        if remaining.iter().all(|&r| r == 0) {
            let mut words: Vec<LyndonWord> = chosen.iter().map(|&i| candidates[i].0.clone()).collect();
            words.sort_by(|a, b| b.cmp(a));
            out.push(LyndonTuple { words });
            return;
        }
        for i in from..candidates.len() {
            let content = &candidates[i].1;
            if content.iter().zip(remaining.iter()).all(|(c, r)| c <= r) {
                remaining.iter_mut().zip(content).for_each(|(r, c)| *r -= c);
                chosen.push(i);
                search(candidates, i + 1, remaining, chosen, out);
                chosen.pop();
                remaining.iter_mut().zip(content).for_each(|(r, c)| *r += c);
            }
        }
    }

    let mut out = Vec::new();
    search(&candidates, 0, &mut m.counts.clone(), &mut Vec::new(), &mut out);
    out.sort_by_key(LyndonTuple::concatenation);
    out
}

/// `(even, odd)` counts of Lyndon tuples over `m` by parity of their index.
pub fn tuple_parity_census(m: &LetterMultiset) -> (usize, usize) {
    lyndon_tuples(m).iter().fold((0, 0), |(even, odd), t| if t.is_odd() { (even, odd + 1) } else { (even + 1, odd) })
}

/// `sum over sigma in S_l of (-1)^{cycles(sigma)}`.
pub fn symmetric_group_parity_sum(l: usize) -> i64 {
    (0..l)
        .permutations(l)
        .map(|p| if cycle_count(&p).is_multiple_of(2) { 1 } else { -1 })
        .sum()
}

pub fn cycle_count(permutation: &[usize]) -> usize {
    let mut seen = vec![false; permutation.len()];
    let mut cycles = 0;
    for start in 0..permutation.len() {
        if !seen[start] {
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = permutation[i];
            }
        }
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(words: &[LyndonWord]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    /// All words of length 1..=max_len over 1..=l, in lexicographic order.
    fn all_words(l: u8, max_len: usize) -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = (1..=max_len)
            .flat_map(|len| (0..len).map(|_| 1..=l).multi_cartesian_product())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn small_binary_lists() {
        assert_eq!(strings(&lyndon_words(2, 2)), ["1", "12", "2"]);
        assert_eq!(strings(&lyndon_words(2, 3)), ["1", "112", "12", "122", "2"]);
        assert_eq!(strings(&lyndon_words(1, 6)), ["1"]);
    }

    #[test]
    fn generation_matches_brute_force() {
        for l in 1..=3u8 {
            for max_len in 1..=6 {
                let brute: Vec<Vec<u8>> = all_words(l, max_len).into_iter().filter(|w| is_lyndon(w)).collect();
                let got: Vec<Vec<u8>> = lyndon_words(l, max_len).into_iter().map(|w| w.0).collect();
                assert_eq!(got, brute, "l={l} max_len={max_len}");
            }
        }
    }

    #[test]
    fn paper_tuple_list() {
        let m = LetterMultiset::new(vec![2, 2]);
        let tuples: Vec<String> = lyndon_tuples(&m).iter().map(|t| t.to_string()).collect();
        assert_eq!(tuples, ["(1122)", "(122)(1)", "(2)(112)", "(2)(12)(1)"]);
        let parities: Vec<usize> = lyndon_tuples(&m).iter().map(LyndonTuple::index).collect();
        assert_eq!(parities, [3, 2, 2, 1]);
        assert_eq!(tuple_parity_census(&m), (2, 2));
    }

    #[test]
    fn small_tuple_cases() {
        let one_two = LetterMultiset::from_letters(&[1, 2]);
        let t: Vec<String> = lyndon_tuples(&one_two).iter().map(|t| t.to_string()).collect();
        assert_eq!(t, ["(12)", "(2)(1)"]);
        assert!(lyndon_tuples(&LetterMultiset::new(vec![2])).is_empty());
        assert_eq!(tuple_parity_census(&LetterMultiset::new(vec![1])), (1, 0));
        assert_eq!(tuple_parity_census(&LetterMultiset::new(vec![1, 1, 1])), (3, 3));
    }

    #[test]
    fn symmetric_group_sums() {
        assert_eq!(symmetric_group_parity_sum(1), -1);
        for l in 2..=6 {
            assert_eq!(symmetric_group_parity_sum(l), 0, "l={l}");
        }
        assert_eq!(cycle_count(&[1, 2, 0]), 1);
        assert_eq!(cycle_count(&[0, 2, 1]), 2);
    }

    #[test]
    fn multiset_display() {
        assert_eq!(LetterMultiset::new(vec![2, 2]).to_string(), "[1^2,2^2]");
        assert_eq!(LetterMultiset::new(vec![1, 0, 3]).to_string(), "[1,3^3]");
    }
}
