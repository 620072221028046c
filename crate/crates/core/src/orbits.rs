//! Primitive periodic orbits and primitive pseudo orbits.
//!
//! Two enumeration modes are provided. Bond-distinct mode walks admissible
//! bond subsets and all in/out pairings at their vertices; these are exactly
//! the pseudo orbits that survive in the determinant expansion of `a_n`.
//! General mode builds every set of distinct primitive orbits of a given
//! total length, repeated bonds included.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BondId, DirectedGraph, VertexId};
use crate::quantize::BondScattering;
use crate::scalar::Real;

/// Default cap on closed walks / pseudo orbits visited in general mode.
pub const DEFAULT_GENERAL_CAP: usize = 5_000_000;

/// A primitive closed bond walk stored as its lexicographically minimal rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodicOrbit {
    bonds: Vec<BondId>,
}

impl PeriodicOrbit {
    pub fn new(g: &DirectedGraph, walk: &[BondId]) -> Result<Self> {
        let (bonds, primitive) = canonical_orbit(g, walk)?;
        if !primitive {
            return Err(Error::NotPrimitive);
        }
        Ok(PeriodicOrbit { bonds })
    }

    /// Builds an orbit from the closed vertex walk `v0 -> v1 -> ... -> v0`.
    pub fn from_vertices(g: &DirectedGraph, vertices: &[VertexId]) -> Result<Self> {
        let walk = g.walk_bonds(vertices).ok_or(Error::NotClosedWalk { position: 0 })?;
        Self::new(g, &walk)
    }

    pub fn bonds(&self) -> &[BondId] {
        &self.bonds
    }

    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    /// Vertices in traversal order, starting at the origin of the first bond.
    pub fn vertices(&self, g: &DirectedGraph) -> Vec<VertexId> {
        self.bonds.iter().map(|&b| g.origin(b)).collect()
    }
}

/// Minimal rotation of a closed bond walk and whether it is primitive.
pub fn canonical_orbit(g: &DirectedGraph, walk: &[BondId]) -> Result<(Vec<BondId>, bool)> {
    let len = walk.len();
    if len == 0 {
        return Err(Error::NotClosedWalk { position: 0 });
    }
    for i in 0..len {
        let b = walk[i];
        if b >= g.bond_count() || g.terminus(b) != g.origin(walk[(i + 1) % len]) {
            return Err(Error::NotClosedWalk { position: i });
        }
    }
    let best = (0..len)
        .min_by(|&i, &j| rotation(walk, i).cmp(rotation(walk, j)))
        .expect("non-empty walk");
    let canonical: Vec<BondId> = rotation(walk, best).copied().collect();
    let primitive = !(1..len).any(|d| len.is_multiple_of(d) && rotation(walk, d).eq(walk.iter()));
    Ok((canonical, primitive))
}

fn rotation(walk: &[BondId], shift: usize) -> impl Iterator<Item = &BondId> + Clone {
    walk[shift..].iter().chain(walk[..shift].iter())
}

/// A set of distinct primitive periodic orbits, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PseudoOrbit {
    orbits: Vec<PeriodicOrbit>,
}

impl PseudoOrbit {
    pub fn new(mut orbits: Vec<PeriodicOrbit>) -> Result<Self> {
        orbits.sort();
        if orbits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedOrbit);
        }
        Ok(PseudoOrbit { orbits })
    }

    pub fn empty() -> Self {
        PseudoOrbit { orbits: Vec::new() }
    }

    pub fn orbits(&self) -> &[PeriodicOrbit] {
        &self.orbits
    }

    /// Topological length: total number of bonds.
    pub fn n(&self) -> usize {
        self.orbits.iter().map(PeriodicOrbit::len).sum()
    }

    /// Number of orbits.
    pub fn m(&self) -> usize {
        self.orbits.len()
    }

    /// Sorted bond ids with repetition. Stands in for the metric length: with
    /// incommensurate bond lengths two pseudo orbits have equal length iff
    /// these multisets agree.
    pub fn bond_multiset(&self) -> Vec<BondId> {
        let mut bonds: Vec<BondId> = self.orbits.iter().flat_map(|o| o.bonds.iter().copied()).collect();
        bonds.sort_unstable();
        bonds
    }

    pub fn has_repeated_bond(&self) -> bool {
        self.bond_multiset().windows(2).any(|w| w[0] == w[1])
    }
}

/// `± 2^{-bonds/2}`: the stability amplitude of a pseudo orbit under DFT
/// scattering, stored exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Amplitude {
    pub negative: bool,
    pub bonds: usize,
}

impl Amplitude {
    pub fn sign(&self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn value<T: Real>(&self) -> T {
        let magnitude = T::lit(0.5f64.powf(self.bonds as f64 / 2.0));
        if self.negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// Stability amplitude `A` (product of the scattering entries along every
/// orbit) and the orbit count `m`.
pub fn amplitude<T: Real>(s: &BondScattering<T>, pseudo: &PseudoOrbit) -> Result<(Amplitude, usize)> {
    let half = T::lit(0.5);
    let tol = T::lit(1e-6);
    let mut negative = false;
    for orbit in pseudo.orbits() {
        let bonds = orbit.bonds();
        for (i, &from) in bonds.iter().enumerate() {
            let to = bonds[(i + 1) % bonds.len()];
            let entry = s.transition(from, to);
            if (entry * entry - half).abs() > tol {
                return Err(Error::NotClosedWalk { position: i });
            }
            negative ^= entry < T::zero();
        }
    }
    Ok((Amplitude { negative, bonds: pseudo.n() }, pseudo.m()))
}

/// Floating-point product of the scattering entries, for cross-checks.
pub fn amplitude_value<T: Real>(s: &BondScattering<T>, pseudo: &PseudoOrbit) -> T {
    pseudo
        .orbits()
        .iter()
        .flat_map(|o| {
            let b = o.bonds();
            (0..b.len()).map(move |i| (b[i], b[(i + 1) % b.len()]))
        })
        .fold(T::one(), |acc, (from, to)| acc * s.transition(from, to))
}

/// Sign of `(-1)^m A`, the quantity shared by all covers of one subset.
pub fn signed_amplitude_sign<T: Real>(s: &BondScattering<T>, pseudo: &PseudoOrbit) -> Result<i64> {
    let (a, m) = amplitude(s, pseudo)?;
    Ok(if m % 2 == 0 { a.sign() } else { -a.sign() })
}

/// All pseudo orbits that use every bond of one admissible subset exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverFamily {
    pub subset: Vec<BondId>,
    pub covers: Vec<PseudoOrbit>,
    /// Vertices entered by two bonds of the subset.
    pub doubly_visited: Vec<VertexId>,
}

impl CoverFamily {
    /// `N`, the number of doubly visited vertices.
    pub fn crossings(&self) -> usize {
        self.doubly_visited.len()
    }
}

/// Every `n`-element bond subset in which each vertex has as many subset bonds
/// entering as leaving, in lexicographic order.
pub fn admissible_subsets(g: &DirectedGraph, n: usize) -> Result<Vec<Vec<BondId>>> {
    let ports = g.ports()?;
    let v_count = g.vertex_count();
    // in-count of u is fixed once every origin of its in-bonds has been decided
    let mut settles_at: Vec<Vec<VertexId>> = vec![Vec::new(); v_count];
    let mut settled_before = vec![false; v_count];
    for (u, p) in ports.iter().enumerate() {
        let last = g.origin(p.in_bonds[0]).max(g.origin(p.in_bonds[1]));
        if last < u {
            settled_before[u] = true;
        } else {
            settles_at[last].push(u);
        }
    }

    struct Search<'a> {
        g: &'a DirectedGraph,
        ports: &'a [crate::graph::VertexPorts],
        settles_at: &'a [Vec<VertexId>],
        settled_before: &'a [bool],
        target: usize,
        in_count: Vec<usize>,
        out_count: Vec<usize>,
        chosen: Vec<BondId>,
        found: Vec<Vec<BondId>>,
    }

    impl Search<'_> {
        fn visit(&mut self, v: VertexId) {
            let remaining = self.ports.len() - v;
            if self.chosen.len() > self.target || self.chosen.len() + 2 * remaining < self.target {
                return;
            }
            if v == self.ports.len() {
                if self.chosen.len() == self.target {
                    let mut subset = self.chosen.clone();
                    subset.sort_unstable();
                    self.found.push(subset);
                }
                return;
            }
            let [o0, o1] = self.ports[v].out_bonds;
            for choice in [&[][..], &[o0][..], &[o1][..], &[o0, o1][..]] {
                if self.settled_before[v] && choice.len() != self.in_count[v] {
                    continue;
                }
                for &b in choice {
                    self.chosen.push(b);
                    self.in_count[self.g.terminus(b)] += 1;
                }
                self.out_count[v] = choice.len();
                let consistent = self.settles_at[v].iter().all(|&u| u > v || self.in_count[u] == self.out_count[u]);
                if consistent {
                    self.visit(v + 1);
                }
                for &b in choice {
                    self.chosen.pop();
                    self.in_count[self.g.terminus(b)] -= 1;
                }
                self.out_count[v] = 0;
            }
        }
    }

    let mut search = Search {
        g,
        ports: &ports,
        settles_at: &settles_at,
        settled_before: &settled_before,
        target: n,
        in_count: vec![0; v_count],
        out_count: vec![0; v_count],
        chosen: Vec::new(),
        found: Vec::new(),
    };
    search.visit(0);
    // Vertices settled after their own turn are checked here.
    let mut found: Vec<Vec<BondId>> =
        search.found.into_iter().filter(|s| g.doubly_visited(s).is_some()).collect();
    found.sort();
    Ok(found)
}

/// Decomposes an admissible subset into cycles under every choice of in/out
/// pairing at its doubly visited vertices.
pub fn covers_of_subset(g: &DirectedGraph, subset: &[BondId]) -> Result<CoverFamily> {
    let ports = g.ports()?;
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.last().is_some_and(|&b| b >= g.bond_count()) {
        return Err(Error::NotAdmissible);
    }
    let doubly_visited = g.doubly_visited(&sorted).ok_or(Error::NotAdmissible)?;
    let member = |b: BondId| sorted.binary_search(&b).is_ok();

    let mut covers = Vec::with_capacity(1 << doubly_visited.len());
    for mask in 0u64..(1u64 << doubly_visited.len()) {
        // successor of each bond within the cover
        let mut next = vec![usize::MAX; g.bond_count()];
        for &b in &sorted {
            let v = g.terminus(b);
            let p = &ports[v];
            let ins: Vec<BondId> = p.in_bonds.iter().copied().filter(|&x| member(x)).collect();
            let outs: Vec<BondId> = p.out_bonds.iter().copied().filter(|&x| member(x)).collect();
            next[b] = if ins.len() == 1 {
                outs[0]
            } else {
                let crossed = doubly_visited
                    .iter()
                    .position(|&d| d == v)
                    .is_some_and(|bit| mask >> bit & 1 == 1);
                let slot = ins.iter().position(|&x| x == b).expect("bond enters its terminus");
                outs[if crossed { 1 - slot } else { slot }]
            };
        }
        let mut seen = vec![false; g.bond_count()];
        let mut orbits = Vec::new();
        for &start in &sorted {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut b = start;
            while !seen[b] {
                seen[b] = true;
                cycle.push(b);
                b = next[b];
            }
            orbits.push(PeriodicOrbit::new(g, &cycle)?);
        }
        covers.push(PseudoOrbit::new(orbits)?);
    }
    debug_assert_eq!(covers.len(), 1 << doubly_visited.len());
    Ok(CoverFamily { subset: sorted, covers, doubly_visited })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationMode {
    /// Pseudo orbits using `n` distinct bonds.
    BondDistinct,
    /// All sets of distinct primitive orbits with `n` bonds in total.
    General,
}

/// Primitive periodic orbits with at most `max_len` bonds, ordered by length
/// and then by bond sequence. `cap` bounds the number of closed walks examined.
pub fn primitive_orbits(g: &DirectedGraph, max_len: usize, cap: usize) -> Result<Vec<PeriodicOrbit>> {
    let ports = g.ports()?;
    let mut orbits = Vec::new();
    let mut examined = 0usize;
    let mut walk = Vec::with_capacity(max_len);
    for start in 0..g.bond_count() {
        walk.clear();
        walk.push(start);
        extend_walks(g, &ports, start, max_len, cap, &mut walk, &mut examined, &mut orbits)?;
    }
    orbits.sort_by(|a: &PeriodicOrbit, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(orbits)
}

#[allow(clippy::too_many_arguments)]
fn extend_walks(
    g: &DirectedGraph,
    ports: &[crate::graph::VertexPorts],
    start: BondId,
    max_len: usize,
    cap: usize,
    walk: &mut Vec<BondId>,
    examined: &mut usize,
    out: &mut Vec<PeriodicOrbit>,
) -> Result<()> {
    let last = *walk.last().expect("walk starts non-empty");
    if g.terminus(last) == g.origin(start) {
        *examined += 1;
        if *examined > cap {
            return Err(Error::CapExceeded { cap });
        }
        let (canonical, primitive) = canonical_orbit(g, walk)?;
        if primitive && canonical == *walk {
            out.push(PeriodicOrbit { bonds: canonical });
        }
    }
    if walk.len() == max_len {
        return Ok(());
    }
    // The minimal rotation starts at its smallest bond, so no bond below `start`.
    for &next in &ports[g.terminus(last)].out_bonds {
        if next >= start {
            walk.push(next);
            extend_walks(g, ports, start, max_len, cap, walk, examined, out)?;
            walk.pop();
        }
    }
    Ok(())
}

/// Primitive pseudo orbits with exactly `n` bonds, sorted.
pub fn enumerate_pseudo_orbits(
    g: &DirectedGraph,
    n: usize,
    mode: EnumerationMode,
    cap: usize,
) -> Result<Vec<PseudoOrbit>> {
    let mut result = match mode {
        EnumerationMode::BondDistinct => {
            let mut all = Vec::new();
            for subset in admissible_subsets(g, n)? {
                all.extend(covers_of_subset(g, &subset)?.covers);
                if all.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
            }
            all
        }
        EnumerationMode::General => {
            if n == 0 {
                return Ok(vec![PseudoOrbit::empty()]);
            }
            let orbits = primitive_orbits(g, n, cap)?;
            let mut all = Vec::new();
            let mut chosen = Vec::new();
            combine_orbits(&orbits, 0, n, cap, &mut chosen, &mut all)?;
            all
        }
    };
    result.sort();
    Ok(result)
}

fn combine_orbits(
    orbits: &[PeriodicOrbit],
    from: usize,
    remaining: usize,
    cap: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<PseudoOrbit>,
) -> Result<()> {
    if remaining == 0 {
        if out.len() >= cap {
            return Err(Error::CapExceeded { cap });
        }
        let members = chosen.iter().map(|&i| orbits[i].clone()).collect();
        out.push(PseudoOrbit::new(members)?);
        return Ok(());
    }
    for i in from..orbits.len() {
        // orbits are sorted by length
        if orbits[i].len() > remaining {
            break;
        }
        chosen.push(i);
        combine_orbits(orbits, i + 1, remaining - orbits[i].len(), cap, chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

/// Checks that canonical forms in `pseudo_orbits` are pairwise distinct.
pub fn is_duplicate_free(pseudo_orbits: &[PseudoOrbit]) -> bool {
    let unique: BTreeSet<&PseudoOrbit> = pseudo_orbits.iter().collect();
    unique.len() == pseudo_orbits.len()
}
