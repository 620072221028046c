//! Directed 4-regular multigraphs: binary-graph construction, Euler-tour
//! orientation, validation and the JSON graph file.

use std::collections::VecDeque;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type BondId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bond {
    pub origin: VertexId,
    pub terminus: VertexId,
}

impl Bond {
    pub fn new(origin: VertexId, terminus: VertexId) -> Self {
        Bond { origin, terminus }
    }

    pub fn is_loop(&self) -> bool {
        self.origin == self.terminus
    }
}

/// Incoming and outgoing bond ids at one vertex, each pair ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPorts {
    pub in_bonds: [BondId; 2],
    pub out_bonds: [BondId; 2],
}

/// A directed multigraph with bonds in canonical `(origin, terminus)` order.
///
/// Construction only checks vertex ranges; 2-in/2-out regularity and strong
/// connectivity are checked by [`DirectedGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    vertex_count: usize,
    bonds: Vec<Bond>,
}

impl DirectedGraph {
    /// Builds a graph, sorting the bonds into canonical order. Parallel bonds
    /// are ordered by their rank among equal pairs, which the sort leaves stable.
    pub fn new(vertex_count: usize, mut bonds: Vec<Bond>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        for b in &bonds {
            for v in [b.origin, b.terminus] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange { vertex: v, vertex_count });
                }
            }
        }
        bonds.sort();
        Ok(DirectedGraph { vertex_count, bonds })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, id: BondId) -> Bond {
        self.bonds[id]
    }

    pub fn origin(&self, id: BondId) -> VertexId {
        self.bonds[id].origin
    }

    pub fn terminus(&self, id: BondId) -> VertexId {
        self.bonds[id].terminus
    }

    /// Bond ids of all bonds `origin -> terminus`.
    pub fn find_bonds(&self, origin: VertexId, terminus: VertexId) -> Vec<BondId> {
        let target = Bond::new(origin, terminus);
        self.bonds.iter().enumerate().filter(|(_, b)| **b == target).map(|(i, _)| i).collect()
    }

    /// Bond ids of the closed vertex walk `v0 -> v1 -> ... -> v0`. Parallel
    /// bonds resolve to the lowest id.
    pub fn walk_bonds(&self, vertices: &[VertexId]) -> Option<Vec<BondId>> {
        let n = vertices.len();
        (0..n)
            .map(|i| self.find_bonds(vertices[i], vertices[(i + 1) % n]).first().copied())
            .collect()
    }

    /// Out-neighbours of `v` in bond order, with multiplicity.
    pub fn successors(&self, v: VertexId) -> Vec<VertexId> {
        self.bonds.iter().filter(|b| b.origin == v).map(|b| b.terminus).collect()
    }

    pub fn out_bonds(&self, v: VertexId) -> Vec<BondId> {
        (0..self.bonds.len()).filter(|&i| self.bonds[i].origin == v).collect()
    }

    pub fn in_bonds(&self, v: VertexId) -> Vec<BondId> {
        (0..self.bonds.len()).filter(|&i| self.bonds[i].terminus == v).collect()
    }

    /// Vertices entered by two bonds of `subset`, or `None` when some vertex
    /// has a different number of subset bonds entering and leaving it.
    pub fn doubly_visited(&self, subset: &[BondId]) -> Option<Vec<VertexId>> {
        let mut balance = vec![0isize; self.vertex_count];
        let mut entering = vec![0usize; self.vertex_count];
        for &b in subset {
            balance[self.origin(b)] -= 1;
            balance[self.terminus(b)] += 1;
            entering[self.terminus(b)] += 1;
        }
        if balance.iter().any(|&x| x != 0) {
            return None;
        }
        Some((0..self.vertex_count).filter(|&v| entering[v] == 2).collect())
    }

    pub fn validate(&self) -> ValidationReport {
        validate_graph(self)
    }

    /// Port table, or an error describing why the graph is not a valid
    /// strongly connected 2-in/2-out graph.
    pub fn ports(&self) -> Result<Vec<VertexPorts>> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(Error::InvalidGraph(report.summary()));
        }
        Ok(report.ports.expect("valid graph has ports"))
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertex_count: self.vertex_count,
            bonds: self.bonds.iter().map(|b| [b.origin, b.terminus]).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    /// Parses a graph file; bonds must already be in canonical order and the
    /// graph must pass validation.
    pub fn from_json(text: &str) -> Result<Self> {
        let g = Self::from_json_unchecked(text)?;
        g.ports()?;
        Ok(g)
    }

    /// Parses a graph file, checking only bond order and vertex ranges.
    pub fn from_json_unchecked(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        let bonds: Vec<Bond> = file.bonds.iter().map(|&[u, v]| Bond::new(u, v)).collect();
        if bonds.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::NonCanonicalBondOrder);
        }
        DirectedGraph::new(file.vertex_count, bonds)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

/// On-disk graph format: `{"V": int, "bonds": [[u, v], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(rename = "V")]
    pub vertex_count: usize,
    pub bonds: Vec<[usize; 2]>,
}

/// Binary graph on `p * 2^r` vertices: vertex `i` feeds `2i` and `2i+1`
/// (indices taken modulo `V`). `p = 1` gives the binary de Bruijn graph.
pub fn build_binary_graph(p: usize, r: u32) -> Result<DirectedGraph> {
    if p.is_multiple_of(2) {
        return Err(Error::BinaryGraphParams { p, r, reason: "p must be odd" });
    }
    if r == 0 {
        return Err(Error::BinaryGraphParams { p, r, reason: "r must be positive" });
    }
    let vertex_count = 1usize
        .checked_shl(r)
        .and_then(|x| x.checked_mul(p))
        .ok_or(Error::BinaryGraphParams { p, r, reason: "vertex count overflows" })?;
    let half = vertex_count / 2;
    let bonds = (0..vertex_count)
        .flat_map(|i| {
            let base = if i < half { 2 * i } else { 2 * i - vertex_count };
            [Bond::new(i, base), Bond::new(i, base + 1)]
        })
        .collect();
    DirectedGraph::new(vertex_count, bonds)
}

/// Orients a connected undirected 4-regular multigraph along an Euler circuit,
/// so every vertex ends up with two incoming and two outgoing bonds.
pub fn orient_four_regular(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Result<DirectedGraph> {
    if vertex_count == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut degree = vec![0usize; vertex_count];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for (e, &(u, v)) in edges.iter().enumerate() {
        for w in [u, v] {
            if w >= vertex_count {
                return Err(Error::VertexOutOfRange { vertex: w, vertex_count });
            }
        }
        degree[u] += 1;
        degree[v] += 1;
        incident[u].push(e);
        if u != v {
            incident[v].push(e);
        }
    }
    if let Some((vertex, &degree)) = degree.iter().enumerate().find(|(_, &d)| d != 4) {
        return Err(Error::NotFourRegular { vertex, degree });
    }

    // Hierholzer, iterative. Each stack frame is (vertex, edge used to arrive).
    let mut used = vec![false; edges.len()];
    let mut cursor = vec![0usize; vertex_count];
    let mut stack: Vec<(VertexId, Option<usize>)> = vec![(0, None)];
    let mut circuit: Vec<(VertexId, Option<usize>)> = Vec::with_capacity(edges.len() + 1);
    while let Some(&(v, _)) = stack.last() {
        let mut next = None;
        while cursor[v] < incident[v].len() {
            let e = incident[v][cursor[v]];
            cursor[v] += 1;
            if !used[e] {
                next = Some(e);
                break;
            }
        }
        match next {
            Some(e) => {
                used[e] = true;
                let (a, b) = edges[e];
                let w = if a == v { b } else { a };
                stack.push((w, Some(e)));
            }
            None => circuit.push(stack.pop().expect("non-empty stack")),
        }
    }
    if used.iter().any(|u| !u) {
        return Err(Error::Disconnected);
    }
    // `circuit` lists the tour backwards; reversing it gives vertex order with
    // each entry's edge leading into it from the previous vertex.
    circuit.reverse();
    let bonds = circuit
        .windows(2)
        .map(|w| Bond::new(w[0].0, w[1].0))
        .collect();
    DirectedGraph::new(vertex_count, bonds)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub bond_count: usize,
    /// `B == 2V`.
    pub bond_count_ok: bool,
    /// Every vertex has exactly two incoming and two outgoing bonds.
    pub regular: bool,
    pub irregular_vertices: Vec<VertexId>,
    pub strongly_connected: bool,
    /// Present only for regular graphs.
    pub ports: Option<Vec<VertexPorts>>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.bond_count_ok && self.regular && self.strongly_connected
    }

    pub fn summary(&self) -> String {
        let mut problems = Vec::new();
        if !self.bond_count_ok {
            problems.push(format!("B={} but 2V={}", self.bond_count, 2 * self.vertex_count));
        }
        if !self.regular {
            problems.push(format!("not 2-in/2-out at vertices {:?}", self.irregular_vertices));
        }
        if !self.strongly_connected {
            problems.push("not strongly connected".to_string());
        }
        if problems.is_empty() {
            "ok".to_string()
        } else {
            problems.join("; ")
        }
    }
}

pub fn validate_graph(g: &DirectedGraph) -> ValidationReport {
    let v_count = g.vertex_count();
    let mut ins: Vec<Vec<BondId>> = vec![Vec::new(); v_count];
    let mut outs: Vec<Vec<BondId>> = vec![Vec::new(); v_count];
    for (id, b) in g.bonds().iter().enumerate() {
        outs[b.origin].push(id);
        ins[b.terminus].push(id);
    }
    let irregular_vertices: Vec<VertexId> =
        (0..v_count).filter(|&v| ins[v].len() != 2 || outs[v].len() != 2).collect();
    let regular = irregular_vertices.is_empty();
    let ports = regular.then(|| {
        (0..v_count)
            .map(|v| VertexPorts {
                in_bonds: [ins[v][0], ins[v][1]],
                out_bonds: [outs[v][0], outs[v][1]],
            })
            .collect()
    });

    let forward: Vec<Vec<VertexId>> = outs.iter().map(|bs| bs.iter().map(|&b| g.terminus(b)).collect()).collect();
    let backward: Vec<Vec<VertexId>> = ins.iter().map(|bs| bs.iter().map(|&b| g.origin(b)).collect()).collect();
    let strongly_connected = reaches_all(&forward) && reaches_all(&backward);

    ValidationReport {
        vertex_count: v_count,
        bond_count: g.bond_count(),
        bond_count_ok: g.bond_count() == 2 * v_count,
        regular,
        irregular_vertices,
        strongly_connected,
        ports,
    }
}

fn reaches_all(adjacency: &[Vec<VertexId>]) -> bool {
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(g: &DirectedGraph) -> Vec<(usize, usize)> {
        g.bonds().iter().map(|b| (b.origin, b.terminus)).collect()
    }

    #[test]
    fn de_bruijn_eight() {
        let g = build_binary_graph(1, 3).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.bond_count(), 16);
        let loops: Vec<_> = g.bonds().iter().filter(|b| b.is_loop()).map(|b| b.origin).collect();
        assert_eq!(loops, vec![0, 7]);
        assert_eq!(g.successors(3), vec![6, 7]);
    }

    #[test]
    fn binary_six() {
        let g = build_binary_graph(3, 1).unwrap();
        assert_eq!((g.vertex_count(), g.bond_count()), (6, 12));
        let loops: Vec<_> = g.bonds().iter().filter(|b| b.is_loop()).map(|b| b.origin).collect();
        assert_eq!(loops, vec![0, 5]);
        assert_eq!(g.successors(4), vec![2, 3]);
    }

    #[test]
    fn smallest_binary_graph() {
        let g = build_binary_graph(1, 1).unwrap();
        assert_eq!(pairs(&g), vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn rejects_bad_binary_params() {
        assert!(build_binary_graph(2, 3).is_err());
        assert!(build_binary_graph(1, 0).is_err());
        assert!(build_binary_graph(3, 0).is_err());
        assert!(build_binary_graph(0, 2).is_err());
    }

    #[test]
    fn binary_in_neighbours_by_inversion() {
        for (p, r) in [(1, 2), (1, 3), (1, 4), (3, 1), (3, 2), (5, 1), (5, 2)] {
            let g = build_binary_graph(p, r).unwrap();
            let v = g.vertex_count();
            for j in 0..v {
                let mut origins: Vec<_> = g.in_bonds(j).iter().map(|&b| g.origin(b)).collect();
                origins.sort();
                assert_eq!(origins, vec![j / 2, j / 2 + v / 2], "p={p} r={r} j={j}");
                assert_eq!(g.out_bonds(j).len(), 2);
            }
        }
    }

    #[test]
    fn validation_passes_for_binary_graphs() {
        let report = build_binary_graph(1, 3).unwrap().validate();
        assert!(report.is_valid(), "{}", report.summary());
        let ports = report.ports.unwrap();
        // loop at 0 is bond 0; in-bonds of 0 are the loop and 4->0
        assert_eq!(ports[0].in_bonds, [0, 8]);
        assert_eq!(ports[0].out_bonds, [0, 1]);
    }

    #[test]
    fn validation_flags_disconnected_component() {
        // Two disjoint copies of the V=2 binary graph.
        let bonds = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)]
            .into_iter()
            .map(|(u, v)| Bond::new(u, v))
            .collect();
        let report = DirectedGraph::new(4, bonds).unwrap().validate();
        assert!(report.regular);
        assert!(!report.strongly_connected);
        assert!(!report.is_valid());
    }

    #[test]
    fn validation_flags_three_out_bonds() {
        let bonds = [(0, 0), (0, 1), (0, 1), (1, 0)].into_iter().map(|(u, v)| Bond::new(u, v)).collect();
        let report = DirectedGraph::new(2, bonds).unwrap().validate();
        assert!(!report.regular);
        assert!(report.irregular_vertices.contains(&0));
        assert!(report.ports.is_none());
    }

    #[test]
    fn orient_k5() {
        let edges: Vec<_> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        let g = orient_four_regular(5, &edges).unwrap();
        assert!(g.validate().is_valid());
    }

    #[test]
    fn orient_shadow_of_de_bruijn() {
        let g = build_binary_graph(1, 3).unwrap();
        let edges: Vec<_> = g.bonds().iter().map(|b| (b.terminus, b.origin)).collect();
        let oriented = orient_four_regular(8, &edges).unwrap();
        assert!(oriented.validate().regular);
        assert_eq!(oriented.bond_count(), 16);
    }

    #[test]
    fn orient_rejects_degree_three() {
        let edges = [(0, 1), (0, 1), (0, 2), (1, 2), (1, 2), (2, 0)];
        // degrees: 0 -> 4, 1 -> 4, 2 -> 4; now break vertex 2
        assert!(orient_four_regular(3, &edges).is_ok());
        let broken = [(0, 1), (0, 1), (0, 2), (1, 2), (1, 2)];
        assert!(matches!(orient_four_regular(3, &broken), Err(Error::NotFourRegular { .. })));
    }

    #[test]
    fn orient_rejects_disconnected() {
        let mut edges = vec![(0, 0), (0, 0)];
        edges.extend([(1, 1), (1, 1)]);
        assert!(matches!(orient_four_regular(2, &edges), Err(Error::Disconnected)));
    }

    #[test]
    fn json_round_trip_and_canonical_check() {
        let g = build_binary_graph(3, 1).unwrap();
        let text = g.to_json().unwrap();
        assert!(text.starts_with("{\"V\":6,\"bonds\":[[0,0],[0,1],[1,2]"));
        assert_eq!(DirectedGraph::from_json(&text).unwrap(), g);
        let shuffled = r#"{"V":2,"bonds":[[0,1],[0,0],[1,0],[1,1]]}"#;
        assert!(matches!(DirectedGraph::from_json(shuffled), Err(Error::NonCanonicalBondOrder)));
        let invalid = r#"{"V":2,"bonds":[[0,0],[0,1],[1,1]]}"#;
        assert!(matches!(DirectedGraph::from_json(invalid), Err(Error::InvalidGraph(_))));
    }
}
