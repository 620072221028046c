//! Self-intersection classification of pseudo orbits, the class-count variance
//! formula, the partner sum `C` and the diagonal approximation.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BondId, DirectedGraph, VertexId};
use crate::orbits::{admissible_subsets, amplitude, enumerate_pseudo_orbits, EnumerationMode, PseudoOrbit};
use crate::quantize::BondScattering;
use crate::scalar::{Dyadic, Real};

/// Exact variance value, a dyadic rational.
pub type VarianceValue = Dyadic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisitProfile {
    /// Number of traversals entering each vertex.
    pub visit_counts: Vec<usize>,
    /// Bonds traversed at least twice, with their multiplicity.
    pub repeated_bonds: BTreeMap<BondId, usize>,
    pub doubly_visited: Vec<VertexId>,
    pub higher_visits: Vec<VertexId>,
}

pub fn visit_profile(g: &DirectedGraph, pseudo: &PseudoOrbit) -> VisitProfile {
    let mut visit_counts = vec![0usize; g.vertex_count()];
    let mut bond_counts: BTreeMap<BondId, usize> = BTreeMap::new();
    for b in pseudo.bond_multiset() {
        visit_counts[g.terminus(b)] += 1;
        *bond_counts.entry(b).or_default() += 1;
    }
    bond_counts.retain(|_, &mut c| c >= 2);
    let doubly_visited = (0..g.vertex_count()).filter(|&v| visit_counts[v] == 2).collect();
    let higher_visits = (0..g.vertex_count()).filter(|&v| visit_counts[v] >= 3).collect();
    VisitProfile { visit_counts, repeated_bonds: bond_counts, doubly_visited, higher_visits }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    /// A bond is traversed more than once: an encounter of positive length,
    /// or one repeated more than twice.
    RepeatedBond,
    /// A vertex is entered three or more times without a repeated bond.
    /// Impossible with two incoming bonds per vertex; kept for audit output.
    HigherVisit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassTag {
    /// No self-intersections.
    P0,
    /// `N >= 1` self-intersections, all two sections crossing at one vertex.
    Phat(usize),
    Excluded(ExclusionReason),
}

impl ClassTag {
    pub fn label(&self) -> &'static str {
        match self {
            ClassTag::P0 => "P0",
            ClassTag::Phat(_) => "P^N",
            ClassTag::Excluded(_) => "excluded",
        }
    }
}

pub fn classify_pseudo_orbit(g: &DirectedGraph, pseudo: &PseudoOrbit) -> ClassTag {
    classify_profile(&visit_profile(g, pseudo))
}

fn classify_profile(profile: &VisitProfile) -> ClassTag {
    if !profile.repeated_bonds.is_empty() {
        ClassTag::Excluded(ExclusionReason::RepeatedBond)
    } else if !profile.higher_visits.is_empty() {
        ClassTag::Excluded(ExclusionReason::HigherVisit)
    } else if profile.doubly_visited.is_empty() {
        ClassTag::P0
    } else {
        ClassTag::Phat(profile.doubly_visited.len())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub n: usize,
    /// `|P_0^n|`.
    pub p0: u64,
    /// `N -> |P̂_N^n|` for `N >= 1`; absent keys are zero.
    pub phat: BTreeMap<usize, u64>,
    /// Pseudo orbits in neither class (general mode only).
    pub excluded: u64,
}

impl ClassCounts {
    pub fn phat_count(&self, crossings: usize) -> u64 {
        self.phat.get(&crossings).copied().unwrap_or(0)
    }

    fn add(&mut self, tag: ClassTag) {
        match tag {
            ClassTag::P0 => self.p0 += 1,
            ClassTag::Phat(k) => *self.phat.entry(k).or_default() += 1,
            ClassTag::Excluded(_) => self.excluded += 1,
        }
    }
}

pub fn class_counts(g: &DirectedGraph, n: usize, mode: EnumerationMode, cap: usize) -> Result<ClassCounts> {
    let mut counts = ClassCounts { n, ..ClassCounts::default() };
    for p in enumerate_pseudo_orbits(g, n, mode, cap)? {
        counts.add(classify_pseudo_orbit(g, &p));
    }
    Ok(counts)
}

/// `2^{-n} (|P_0^n| + sum_N 2^N |P̂_N^n|)`, exactly.
pub fn variance_from_classes(counts: &ClassCounts) -> VarianceValue {
    let weighted = counts
        .phat
        .iter()
        .fold(num_bigint::BigInt::from(counts.p0), |acc, (&k, &c)| acc + (num_bigint::BigInt::from(c) << k));
    Dyadic::new(weighted, counts.n as u32)
}

/// `sum over balanced n-subsets I of 2^{2N(I) - n}`, the exact minor sum
/// without any floating point. Cheaper than pseudo-orbit enumeration.
pub fn balanced_subset_variance(g: &DirectedGraph, n: usize) -> Result<VarianceValue> {
    let mut weighted = num_bigint::BigInt::from(0);
    for subset in admissible_subsets(g, n)? {
        let crossings = g.doubly_visited(&subset).map_or(0, |v| v.len());
        weighted += num_bigint::BigInt::from(1) << (2 * crossings);
    }
    Ok(Dyadic::new(weighted, n as u32))
}

/// Partner sum `sum_{γ'} (-1)^{m + m'} A Ā'` over a partner set sharing the
/// bond multiset of `pseudo`.
pub fn c_gamma<T: Real>(s: &BondScattering<T>, pseudo: &PseudoOrbit, partners: &[PseudoOrbit]) -> Result<Dyadic> {
    let multiset = pseudo.bond_multiset();
    let (a, m) = amplitude(s, pseudo)?;
    let mut total: i64 = 0;
    for partner in partners {
        if partner.bond_multiset() != multiset {
            return Err(Error::PartnerMismatch);
        }
        let (a2, m2) = amplitude(s, partner)?;
        let parity = if (m + m2) % 2 == 0 { 1 } else { -1 };
        total += parity * a.sign() * a2.sign();
    }
    // each product A Ā' has magnitude 2^{-n}
    Ok(Dyadic::new(total, pseudo.n() as u32))
}

/// Semiclassical estimate `2^{-n} |P^n|` with `|P^n|` from general-mode
/// enumeration.
pub fn diagonal_approximation(g: &DirectedGraph, n: usize, cap: usize) -> Result<Dyadic> {
    let count = enumerate_pseudo_orbits(g, n, EnumerationMode::General, cap)?.len();
    Ok(Dyadic::new(count as u64, n as u32))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditEntry {
    pub pseudo_orbit: PseudoOrbit,
    pub class: ClassTag,
    pub c: Dyadic,
}

/// General-mode check of the partner sums for every primitive pseudo orbit of
/// length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationAudit {
    pub n: usize,
    pub entries: Vec<AuditEntry>,
    /// `sum_γ C_γ` over all of `P^n`.
    pub total: Dyadic,
    /// Excluded pseudo orbits whose `C` is nonzero.
    pub excluded_nonzero: usize,
    /// Classified pseudo orbits whose `C` differs from `2^{N-n}`.
    pub classified_mismatch: usize,
    pub counts: ClassCounts,
}

impl CancellationAudit {
    pub fn passes(&self) -> bool {
        self.excluded_nonzero == 0 && self.classified_mismatch == 0 && self.total == variance_from_classes(&self.counts)
    }
}

pub fn cancellation_audit<T: Real>(s: &BondScattering<T>, n: usize, cap: usize) -> Result<CancellationAudit> {
    let g = s.graph();
    let all = enumerate_pseudo_orbits(g, n, EnumerationMode::General, cap)?;
    let mut groups: BTreeMap<Vec<BondId>, Vec<PseudoOrbit>> = BTreeMap::new();
    for p in all {
        groups.entry(p.bond_multiset()).or_default().push(p);
    }
    let mut entries = Vec::new();
    let mut counts = ClassCounts { n, ..ClassCounts::default() };
    let mut excluded_nonzero = 0;
    let mut classified_mismatch = 0;
    let mut total = Dyadic::from_integer(0);
    for partners in groups.values() {
        for p in partners {
            let c = c_gamma(s, p, partners)?;
            let class = classify_pseudo_orbit(g, p);
            counts.add(class);
            match class {
                ClassTag::Excluded(_) => excluded_nonzero += usize::from(c != Dyadic::from_integer(0)),
                ClassTag::P0 => classified_mismatch += usize::from(c != Dyadic::power_of_two(-(n as i64))),
                ClassTag::Phat(k) => {
                    classified_mismatch += usize::from(c != Dyadic::power_of_two(k as i64 - n as i64))
                }
            }
            total = total + c.clone();
            entries.push(AuditEntry { pseudo_orbit: p.clone(), class, c });
        }
    }
    Ok(CancellationAudit { n, entries, total, excluded_nonzero, classified_mismatch, counts })
}

/// One line of the orbit dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub orbits: Vec<Vec<BondId>>,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub crossings: usize,
    pub class: &'static str,
}

impl OrbitRecord {
    pub fn new(g: &DirectedGraph, pseudo: &PseudoOrbit) -> Self {
        let profile = visit_profile(g, pseudo);
        let class = classify_profile(&profile);
        OrbitRecord {
            orbits: pseudo.orbits().iter().map(|o| o.bonds().to_vec()).collect(),
            n: pseudo.n(),
            m: pseudo.m(),
            crossings: profile.doubly_visited.len(),
            class: class.label(),
        }
    }
}

/// Writes pseudo orbits as JSON lines.
pub fn write_orbit_dump<W: Write>(g: &DirectedGraph, pseudo_orbits: &[PseudoOrbit], mut out: W) -> Result<()> {
    for p in pseudo_orbits {
        serde_json::to_writer(&mut out, &OrbitRecord::new(g, p))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_binary_graph;
    use crate::orbits::{covers_of_subset, PeriodicOrbit, DEFAULT_GENERAL_CAP};

    fn pseudo(g: &DirectedGraph, orbits: &[&[VertexId]]) -> PseudoOrbit {
        PseudoOrbit::new(orbits.iter().map(|vs| PeriodicOrbit::from_vertices(g, vs).unwrap()).collect()).unwrap()
    }

    #[test]
    fn profiles() {
        let g8 = build_binary_graph(1, 3).unwrap();
        let p = visit_profile(&g8, &pseudo(&g8, &[&[0], &[7]]));
        assert!(p.visit_counts.iter().all(|&c| c <= 1));
        assert!(p.doubly_visited.is_empty());

        let g6 = build_binary_graph(3, 1).unwrap();
        let p = visit_profile(&g6, &pseudo(&g6, &[&[0, 0, 1, 3]]));
        assert_eq!(p.doubly_visited, vec![0]);
        assert!(p.repeated_bonds.is_empty());

        let p = visit_profile(&g8, &pseudo(&g8, &[&[2, 5], &[2, 5, 3, 6, 5]]));
        let two_five = g8.find_bonds(2, 5)[0];
        let five_two = g8.find_bonds(5, 2)[0];
        assert_eq!(p.repeated_bonds, BTreeMap::from([(two_five, 2), (five_two, 2)]));
        assert_eq!(p.visit_counts[5], 3);
        assert_eq!(p.higher_visits, vec![5]);
        assert_eq!(classify_pseudo_orbit(&g8, &pseudo(&g8, &[&[2, 5], &[2, 5, 3, 6, 5]])), ClassTag::Excluded(ExclusionReason::RepeatedBond));
    }

    #[test]
    fn binary_six_n4_classes() {
        let g = build_binary_graph(3, 1).unwrap();
        let all = enumerate_pseudo_orbits(&g, 4, EnumerationMode::BondDistinct, usize::MAX).unwrap();
        let mut p0: Vec<PseudoOrbit> = all.iter().filter(|p| classify_pseudo_orbit(&g, p) == ClassTag::P0).cloned().collect();
        let mut p1: Vec<PseudoOrbit> =
            all.iter().filter(|p| classify_pseudo_orbit(&g, p) == ClassTag::Phat(1)).cloned().collect();
        let mut expected_p0 = vec![
            pseudo(&g, &[&[1, 2, 4, 3]]),
            pseudo(&g, &[&[1, 3], &[2, 4]]),
            pseudo(&g, &[&[0], &[2, 5, 4]]),
            pseudo(&g, &[&[5], &[0, 1, 3]]),
            pseudo(&g, &[&[0], &[5], &[1, 3]]),
            pseudo(&g, &[&[0], &[5], &[2, 4]]),
        ];
        let mut expected_p1 = vec![
            pseudo(&g, &[&[0], &[0, 1, 3]]),
            pseudo(&g, &[&[0, 0, 1, 3]]),
            pseudo(&g, &[&[5], &[2, 5, 4]]),
            pseudo(&g, &[&[2, 5, 5, 4]]),
        ];
        for v in [&mut p0, &mut p1, &mut expected_p0, &mut expected_p1] {
            v.sort();
        }
        assert_eq!(p0, expected_p0);
        assert_eq!(p1, expected_p1);
    }

    #[test]
    fn table_rows() {
        let g8 = build_binary_graph(1, 3).unwrap();
        let c7 = class_counts(&g8, 7, EnumerationMode::BondDistinct, usize::MAX).unwrap();
        assert_eq!((c7.p0, c7.phat_count(1), c7.phat_count(2)), (16, 16, 8));
        let c3 = class_counts(&g8, 3, EnumerationMode::BondDistinct, usize::MAX).unwrap();
        assert_eq!(c3.p0, 4);
        assert!(c3.phat.is_empty());
        let g6 = build_binary_graph(3, 1).unwrap();
        let c6 = class_counts(&g6, 6, EnumerationMode::BondDistinct, usize::MAX).unwrap();
        assert_eq!((c6.p0, c6.phat_count(1)), (8, 8));
        assert_eq!(c6.phat.len(), 1);
    }

    #[test]
    fn formula_values() {
        let row7 = ClassCounts { n: 7, p0: 16, phat: BTreeMap::from([(1, 16), (2, 8)]), excluded: 0 };
        assert_eq!(variance_from_classes(&row7).to_string(), "5/8");
        let row8 = ClassCounts { n: 8, p0: 16, phat: BTreeMap::from([(1, 16), (2, 24)]), excluded: 0 };
        assert_eq!(variance_from_classes(&row8).to_string(), "9/16");
        let row0 = ClassCounts { n: 0, p0: 1, ..ClassCounts::default() };
        assert_eq!(variance_from_classes(&row0), Dyadic::from_integer(1));
    }

    #[test]
    fn partner_sums() {
        let g8 = build_binary_graph(1, 3).unwrap();
        let s8 = BondScattering::<f64>::new(&g8).unwrap();
        let lone = pseudo(&g8, &[&[0]]);
        assert_eq!(c_gamma(&s8, &lone, std::slice::from_ref(&lone)).unwrap(), Dyadic::new(1, 1));

        let g6 = build_binary_graph(3, 1).unwrap();
        let s6 = BondScattering::<f64>::new(&g6).unwrap();
        let gamma = pseudo(&g6, &[&[0], &[0, 1, 3]]);
        let family = covers_of_subset(&g6, &gamma.bond_multiset()).unwrap();
        assert_eq!(c_gamma(&s6, &gamma, &family.covers).unwrap(), Dyadic::new(1, 3));
        assert!(matches!(c_gamma(&s6, &gamma, &[pseudo(&g6, &[&[0]])]), Err(Error::PartnerMismatch)));
    }

    #[test]
    fn balanced_subsets_agree_with_classes() {
        for (p, r) in [(1, 3), (3, 1)] {
            let g = build_binary_graph(p, r).unwrap();
            for n in 0..=g.bond_count() {
                let counts = class_counts(&g, n, EnumerationMode::BondDistinct, usize::MAX).unwrap();
                assert_eq!(balanced_subset_variance(&g, n).unwrap(), variance_from_classes(&counts), "n={n}");
            }
        }
        let g16 = build_binary_graph(1, 4).unwrap();
        assert_eq!(balanced_subset_variance(&g16, 16).unwrap(), Dyadic::new(145, 8));
    }

    #[test]
    fn diagonal_small_n() {
        let g = build_binary_graph(1, 3).unwrap();
        assert_eq!(diagonal_approximation(&g, 0, DEFAULT_GENERAL_CAP).unwrap(), Dyadic::from_integer(1));
        assert_eq!(diagonal_approximation(&g, 2, DEFAULT_GENERAL_CAP).unwrap(), Dyadic::new(2, 2));
    }

    #[test]
    fn audit_small_n() {
        let g = build_binary_graph(1, 3).unwrap();
        let s = BondScattering::<f64>::new(&g).unwrap();
        for n in 0..=5 {
            let audit = cancellation_audit(&s, n, DEFAULT_GENERAL_CAP).unwrap();
            assert!(audit.passes(), "n={n}");
        }
    }

    #[test]
    fn orbit_dump_format() {
        let g = build_binary_graph(3, 1).unwrap();
        let mut buf = Vec::new();
        write_orbit_dump(&g, &[pseudo(&g, &[&[0, 0, 1, 3]]), pseudo(&g, &[&[0]])], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], r#"{"orbits":[[0,1,3,6]],"n":4,"m":1,"N":1,"class":"P^N"}"#);
        assert_eq!(lines[1], r#"{"orbits":[[0]],"n":1,"m":1,"N":0,"class":"P0"}"#);
    }
}
