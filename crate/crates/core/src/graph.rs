//! Labeled simple graphs and the surgery primitives used by every operator.
//!
//! The position of an edge in [`SimpleGraph::edges`] is its orientation slot:
//! for even `n` an orientation is an ordering of the edge set, so the edge list
//! *is* the orientation and permuting it changes the sign of the pair.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Adjacency rows are `u64` bitsets.
pub const MAX_VERTICES: usize = 64;

pub type Edge = (u8, u8);

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawGraph> for SimpleGraph {
    type Error = GraphError;
    fn try_from(raw: RawGraph) -> Result<Self, GraphError> {
        SimpleGraph::new(raw.vertex_count, &raw.edges)
    }
}

impl From<SimpleGraph> for RawGraph {
    fn from(g: SimpleGraph) -> Self {
        RawGraph {
            vertex_count: g.n,
            edges: g.edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect(),
        }
    }
}

/// Result of contracting an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contraction {
    Graph(SimpleGraph),
    /// The endpoints share a neighbour, so the result has a double edge.
    NonSimple,
}

/// Result of inserting an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Graph(SimpleGraph),
    AlreadyAdjacent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    pub loop_order: i64,
    pub degree_n0: i64,
    /// Degree in G_2, `k - 2(r - 1)`.
    pub degree_n2: i64,
}

/// Connected components of a graph together with the sign of the
/// permutation that sorts the edge order component by component.
#[derive(Clone, Debug)]
pub struct Components {
    pub parts: Vec<SimpleGraph>,
    /// `parts[i]` vertex `j` is vertex `vertex_maps[i][j]` of the input.
    pub vertex_maps: Vec<Vec<u8>>,
    pub unshuffle_sign: i8,
}

impl SimpleGraph {
    /// Builds a graph from an edge list; pairs may be given in either order.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut adj = vec![0u64; n];
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange { vertex: a.max(b), n });
            }
            if a == b {
                return Err(GraphError::SelfEdge(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if adj[u] >> v & 1 == 1 {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            norm.push((u as u8, v as u8));
        }
        Ok(SimpleGraph { n, edges: norm, adj })
    }

    /// Internal constructor for edge lists that are already normalized and simple.
    pub(crate) fn from_normalized(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![0u64; n];
        for &(u, v) in &edges {
            debug_assert!(u < v && (v as usize) < n);
            debug_assert!(adj[u as usize] >> v & 1 == 0, "duplicate edge");
            adj[u as usize] |= 1 << v;
            adj[v as usize] |= 1 << u;
        }
        SimpleGraph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        SimpleGraph { n, edges: Vec::new(), adj: vec![0; n] }
    }

    /// Complete graph on `n` vertices, edges in lexicographic order.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u as u8, v as u8));
            }
        }
        Self::from_normalized(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u as u8, v as u8) } else { (v as u8, u as u8) };
        self.edges.iter().position(|&e| e == key)
    }

    /// Indices of the edges incident to `v`, in orientation order.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        let v = v as u8;
        (0..self.edges.len())
            .filter(|&i| self.edges[i].0 == v || self.edges[i].1 == v)
            .collect()
    }

    pub fn grading(&self) -> Grading {
        let k = self.edges.len() as i64;
        let r = self.n as i64;
        let c = self.component_count() as i64;
        Grading { loop_order: k - r + c, degree_n0: -k, degree_n2: k - 2 * (r - 1) }
    }

    /// Loop order `k - r + c`.
    pub fn loop_order(&self) -> i64 {
        self.grading().loop_order
    }

    /// Bitset of the vertices reachable from `start` avoiding `blocked`.
    pub fn reach(&self, start: usize, blocked: u64) -> u64 {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & !seen & !blocked;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    pub fn all_vertices(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.reach(0, 0) == self.all_vertices()
    }

    pub fn component_count(&self) -> usize {
        let mut left = self.all_vertices();
        let mut count = 0;
        while left != 0 {
            let v = left.trailing_zeros() as usize;
            left &= !self.reach(v, 0);
            count += 1;
        }
        count
    }

    /// Contracts edge `e`; the merged vertex keeps the lower label and higher
    /// labels shift down by one. The contracted edge leaves the ordering and
    /// all other edges keep their relative positions.
    pub fn contract_edge(&self, e: usize) -> Contraction {
        let (u, v) = self.edges[e];
        if self.adj[u as usize] & self.adj[v as usize] != 0 {
            return Contraction::NonSimple;
        }
        Contraction::Graph(self.contract_unchecked(e))
    }

    fn contract_unchecked(&self, e: usize) -> SimpleGraph {
        let (u, v) = self.edges[e];
        let map = |w: u8| -> u8 {
            if w == v {
                u
            } else if w > v {
                w - 1
            } else {
                w
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &(a, b))| {
                let (a, b) = (map(a), map(b));
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        SimpleGraph::from_normalized(self.n - 1, edges)
    }

    /// Contraction that merges resulting parallel edges into one. Only the
    /// underlying simple graph is meaningful; orientation is not tracked.
    pub fn contract_edge_collapsing(&self, e: usize) -> SimpleGraph {
        let (u, v) = self.edges[e];
        let map = |w: u8| -> u8 {
            if w == v {
                u
            } else if w > v {
                w - 1
            } else {
                w
            }
        };
        let mut seen = std::collections::BTreeSet::new();
        let mut edges = Vec::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if i == e {
                continue;
            }
            let (a, b) = (map(a), map(b));
            let p = if a < b { (a, b) } else { (b, a) };
            if seen.insert(p) {
                edges.push(p);
            }
        }
        SimpleGraph::from_normalized(self.n - 1, edges)
    }

    /// Adds the edge `{u, v}` in the first orientation slot.
    pub fn add_edge(&self, u: usize, v: usize) -> Result<Insertion, GraphError> {
        if u >= self.n || v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: u.max(v), n: self.n });
        }
        if u == v {
            return Err(GraphError::SelfEdge(u));
        }
        if self.has_edge(u, v) {
            return Ok(Insertion::AlreadyAdjacent);
        }
        let (a, b) = if u < v { (u as u8, v as u8) } else { (v as u8, u as u8) };
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        edges.push((a, b));
        edges.extend_from_slice(&self.edges);
        Ok(Insertion::Graph(SimpleGraph::from_normalized(self.n, edges)))
    }

    /// Relabels vertices by `perm` (vertex `v` becomes `perm[v]`), keeping
    /// the edge order.
    pub fn relabel(&self, perm: &[u8]) -> SimpleGraph {
        assert_eq!(perm.len(), self.n);
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (perm[a as usize], perm[b as usize]);
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        SimpleGraph::from_normalized(self.n, edges)
    }

    /// Reorders edges: new position `i` holds old edge `order[i]`.
    pub fn reorder_edges(&self, order: &[usize]) -> SimpleGraph {
        assert_eq!(order.len(), self.edges.len());
        let edges = order.iter().map(|&i| self.edges[i]).collect();
        SimpleGraph::from_normalized(self.n, edges)
    }

    /// Same graph with edges in lexicographic order, and the sign of the sort.
    pub fn sorted_edges(&self) -> (SimpleGraph, i8) {
        let sign = permutation_sign_of_sequence(&self.edges);
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        (SimpleGraph::from_normalized(self.n, edges), sign)
    }

    /// Induced subgraph on the vertices of `mask`, relabeled in increasing
    /// order, edges in inherited order.
    pub fn induced(&self, mask: u64) -> (SimpleGraph, Vec<u8>) {
        let mut map = vec![u8::MAX; self.n];
        let mut back = Vec::new();
        for v in 0..self.n {
            if mask >> v & 1 == 1 {
                map[v] = back.len() as u8;
                back.push(v as u8);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .map(|&(a, b)| (map[a as usize], map[b as usize]))
            .collect();
        (SimpleGraph::from_normalized(back.len(), edges), back)
    }

    pub fn components(&self) -> Components {
        let mut left = self.all_vertices();
        let mut masks = Vec::new();
        while left != 0 {
            let v = left.trailing_zeros() as usize;
            let comp = self.reach(v, 0);
            masks.push(comp);
            left &= !comp;
        }
        // position of each edge in the concatenated component order
        let comp_of = |v: u8| masks.iter().position(|m| m >> v & 1 == 1).unwrap();
        let keys: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(a, _))| (comp_of(a), i))
            .collect();
        let unshuffle_sign = permutation_sign_of_sequence(&keys);
        let mut parts = Vec::new();
        let mut vertex_maps = Vec::new();
        for m in masks {
            let (g, back) = self.induced(m);
            parts.push(g);
            vertex_maps.push(back);
        }
        Components { parts, vertex_maps, unshuffle_sign }
    }

    /// Disjoint union, `other`'s vertices shifted after `self`'s and its edges
    /// appended after `self`'s.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> SimpleGraph {
        let off = self.n as u8;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (a + off, b + off)));
        SimpleGraph::from_normalized(self.n + other.n, edges)
    }

    pub fn complement(&self) -> SimpleGraph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u as u8, v as u8));
                }
            }
        }
        SimpleGraph::from_normalized(self.n, edges)
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph({}; {:?})", self.n, self.edges)
    }
}

/// Sign of the permutation that sorts `seq` (entries must be distinct).
pub fn permutation_sign_of_sequence<T: Ord>(seq: &[T]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of a permutation given as an image vector.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) use crate::fixtures::{prism, wheel};

    #[test]
    fn builds_k4() {
        let g = SimpleGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g, SimpleGraph::complete(4));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(SimpleGraph::new(3, &[(0, 1), (0, 1)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(SimpleGraph::new(3, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(SimpleGraph::new(2, &[(0, 0)]), Err(GraphError::SelfEdge(0)));
        assert!(matches!(
            SimpleGraph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn unsorted_pairs_are_normalized_in_place() {
        let g = SimpleGraph::new(3, &[(2, 1), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(1, 2), (0, 1)]);
    }

    #[test]
    fn k4_contractions_are_all_non_simple() {
        let k4 = SimpleGraph::complete(4);
        for e in 0..6 {
            assert_eq!(k4.contract_edge(e), Contraction::NonSimple);
        }
    }

    #[test]
    fn prism_vertical_contracts_to_four_wheel() {
        let p = prism();
        for e in 0..6 {
            assert_eq!(p.contract_edge(e), Contraction::NonSimple, "triangle edge {e}");
        }
        for e in 6..9 {
            let Contraction::Graph(w) = p.contract_edge(e) else { panic!("vertical {e}") };
            assert_eq!(w.vertex_count(), 5);
            assert_eq!(w.edge_count(), 8);
            let mut degs: Vec<usize> = (0..5).map(|v| w.degree(v)).collect();
            degs.sort();
            assert_eq!(degs, vec![3, 3, 3, 3, 4]);
            // rim of the hub-deleted graph is a 4-cycle
            let hub = (0..5).find(|&v| w.degree(v) == 4).unwrap();
            let (rim, _) = w.induced(w.all_vertices() & !(1 << hub));
            assert_eq!(rim.edge_count(), 4);
            assert!((0..4).all(|v| rim.degree(v) == 2));
            assert!(rim.is_connected());
        }
    }

    #[test]
    fn contraction_keeps_loop_order_and_merges_valence() {
        let c5 = SimpleGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let Contraction::Graph(c4) = c5.contract_edge(2) else { panic!() };
        assert_eq!(c4.vertex_count(), 4);
        assert_eq!(c4.edge_count(), 4);
        assert_eq!(c4.loop_order(), c5.loop_order());
        assert_eq!(c4.edges(), &[(0, 1), (1, 2), (2, 3), (0, 3)]);
    }

    #[test]
    fn add_edge_goes_first() {
        let k4 = SimpleGraph::complete(4);
        assert_eq!(k4.add_edge(0, 3).unwrap(), Insertion::AlreadyAdjacent);
        assert!(k4.add_edge(1, 1).is_err());
        let w5 = wheel(5);
        let Insertion::Graph(g) = w5.add_edge(3, 1).unwrap() else { panic!() };
        assert_eq!(g.edge_count(), 11);
        assert_eq!(g.loop_order(), 6);
        assert_eq!(g.edge(0), (1, 3));
    }

    #[test]
    fn gradings() {
        let k4 = SimpleGraph::complete(4).grading();
        assert_eq!(k4, Grading { loop_order: 3, degree_n0: -6, degree_n2: 0 });
        assert_eq!(SimpleGraph::complete(6).loop_order(), 10);
        let w5 = wheel(5).grading();
        assert_eq!((w5.loop_order, w5.degree_n2), (5, 0));
    }

    #[test]
    fn components_of_disjoint_k4s() {
        let k4 = SimpleGraph::complete(4);
        assert_eq!(k4.components().parts.len(), 1);
        let two = k4.disjoint_union(&k4);
        let c = two.components();
        assert_eq!(c.parts.len(), 2);
        assert_eq!(c.unshuffle_sign, 1);
        assert_eq!(two.loop_order(), 6);
    }

    #[test]
    fn unshuffle_sign_tracks_interleaving() {
        // edges alternate between two components: (a0, b0, a1, b1, ...)
        let g = SimpleGraph::new(6, &[(0, 1), (3, 4), (1, 2), (4, 5)]).unwrap();
        let c = g.components();
        assert_eq!(c.parts.len(), 2);
        assert_eq!(c.unshuffle_sign, -1);
    }

    #[test]
    fn permutation_signs_agree() {
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(permutation_sign_of_sequence(&[3, 1, 2]), 1);
        assert_eq!(permutation_sign_of_sequence(&[2, 1, 3]), -1);
    }
}
