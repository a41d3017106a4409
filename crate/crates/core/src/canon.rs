//! Canonical labeling, automorphism groups and orientation signs.
//!
//! The search is the usual individualization-refinement tree: vertices are
//! split into cells by color, refined to an equitable partition, and a vertex
//! of the first non-singleton cell is individualized at each level. The
//! canonical labeling is the leaf whose relabeled adjacency matrix is
//! lexicographically largest. Leaves with identical matrices yield
//! automorphisms, which prune sibling subtrees (orbits of the pointwise
//! stabilizer of the current prefix) and trigger backjumps.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::graph::{permutation_sign_of_sequence, Edge, SimpleGraph};
use crate::graph6;

/// Result of the canonical search on a (colored) graph.
#[derive(Clone, Debug)]
pub struct Labeling {
    /// `order[i]` is the vertex placed at canonical position `i`.
    pub order: Vec<u8>,
    /// Inverse of `order`.
    pub position: Vec<u8>,
    /// Generators of the color-preserving automorphism group, as vertex maps.
    pub generators: Vec<Vec<u8>>,
    orbit_lengths: Vec<usize>,
}

impl Labeling {
    pub fn group_order(&self) -> BigUint {
        self.orbit_lengths.iter().fold(BigUint::from(1u32), |acc, &l| acc * BigUint::from(l))
    }

    /// Orbit representative (smallest member) for every vertex.
    pub fn vertex_orbits(&self, n: usize) -> Vec<u8> {
        orbits(n, self.generators.iter())
    }
}

/// Canonical labeling of the graph with adjacency rows `adj`. Vertices of
/// lower color come first in the canonical order.
pub fn canonical_labeling(adj: &[u64], colors: Option<&[u32]>) -> Labeling {
    let n = adj.len();
    if n == 0 {
        return Labeling { order: vec![], position: vec![], generators: vec![], orbit_lengths: vec![] };
    }
    let mut cells = initial_cells(n, colors);
    refine(adj, &mut cells);
    let mut search = Search { adj, n, first: None, best: None, generators: Vec::new() };
    let mut path = Vec::new();
    search.visit(cells, &mut path);
    let best = search.best.take().expect("search visits at least one leaf");
    let first = search.first.take().expect("search visits at least one leaf");

    let mut orbit_lengths = Vec::with_capacity(first.path.len());
    for level in 0..first.path.len() {
        let prefix = &first.path[..level];
        let fixing = search
            .generators
            .iter()
            .filter(|g| prefix.iter().all(|&v| g[v as usize] == v));
        let orb = orbits(n, fixing);
        let rep = orb[first.path[level] as usize];
        orbit_lengths.push(orb.iter().filter(|&&o| o == rep).count());
    }

    let mut position = vec![0u8; n];
    for (i, &v) in best.order.iter().enumerate() {
        position[v as usize] = i as u8;
    }
    Labeling { order: best.order, position, generators: search.generators, orbit_lengths }
}

fn initial_cells(n: usize, colors: Option<&[u32]>) -> Vec<u64> {
    match colors {
        None => vec![if n == 64 { u64::MAX } else { (1u64 << n) - 1 }],
        Some(colors) => {
            let mut distinct: Vec<u32> = colors.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            distinct
                .iter()
                .map(|&c| {
                    (0..n).filter(|&v| colors[v] == c).fold(0u64, |m, v| m | 1 << v)
                })
                .collect()
        }
    }
}

/// Refines `cells` to an equitable partition. Every choice depends only on
/// cell positions, never on vertex labels.
fn refine(adj: &[u64], cells: &mut Vec<u64>) {
    let mut buckets = [0u64; 65];
    let mut t = 0;
    while t < cells.len() {
        let splitter = cells[t];
        let mut split = false;
        let mut i = 0;
        while i < cells.len() {
            let cell = cells[i];
            if cell & cell.wrapping_sub(1) == 0 {
                i += 1;
                continue;
            }
            let (mut lo, mut hi) = (usize::MAX, 0);
            let mut rest = cell;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let k = (adj[v] & splitter).count_ones() as usize;
                buckets[k] |= 1 << v;
                lo = lo.min(k);
                hi = hi.max(k);
            }
            if lo == hi {
                buckets[lo] = 0;
                i += 1;
                continue;
            }
            let mut parts = Vec::new();
            for b in buckets.iter_mut().take(hi + 1).skip(lo) {
                if *b != 0 {
                    parts.push(*b);
                    *b = 0;
                }
            }
            let len = parts.len();
            cells.splice(i..=i, parts);
            i += len;
            split = true;
        }
        t = if split { 0 } else { t + 1 };
    }
}

struct Leaf {
    path: Vec<u8>,
    order: Vec<u8>,
    code: Vec<u64>,
}

enum Step {
    Continue,
    /// Abandon the subtree and resume at the node with this many
    /// individualized vertices.
    JumpTo(usize),
}

struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<u8>>,
}

impl Search<'_> {
    fn visit(&mut self, cells: Vec<u64>, path: &mut Vec<u8>) -> Step {
        if cells.len() == self.n {
            return self.leaf(&cells, path);
        }
        let t = cells.iter().position(|&c| c & c.wrapping_sub(1) != 0).unwrap();
        let cell = cells[t];
        let depth = path.len();
        let mut explored: Vec<u8> = Vec::new();
        let mut cached: Option<(usize, Vec<u8>)> = None;
        let mut rest = cell;
        while rest != 0 {
            let v = rest.trailing_zeros() as u8;
            rest &= rest - 1;
            if !explored.is_empty() && !self.generators.is_empty() {
                let stale = cached.as_ref().is_none_or(|(k, _)| *k != self.generators.len());
                if stale {
                    let fixing = self
                        .generators
                        .iter()
                        .filter(|g| path.iter().all(|&p| g[p as usize] == p));
                    cached = Some((self.generators.len(), orbits(self.n, fixing)));
                }
                let orb = &cached.as_ref().unwrap().1;
                if explored.iter().any(|&u| orb[u as usize] == orb[v as usize]) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..t]);
            child.push(1u64 << v);
            child.push(cell & !(1u64 << v));
            child.extend_from_slice(&cells[t + 1..]);
            refine(self.adj, &mut child);
            path.push(v);
            let step = self.visit(child, path);
            path.pop();
            if let Step::JumpTo(level) = step {
                if level < depth {
                    return step;
                }
            }
        }
        Step::Continue
    }

    fn leaf(&mut self, cells: &[u64], path: &[u8]) -> Step {
        let order: Vec<u8> = cells.iter().map(|c| c.trailing_zeros() as u8).collect();
        let mut position = vec![0u8; self.n];
        for (i, &v) in order.iter().enumerate() {
            position[v as usize] = i as u8;
        }
        let code: Vec<u64> = order
            .iter()
            .map(|&v| {
                let mut row = 0u64;
                let mut rest = self.adj[v as usize];
                while rest != 0 {
                    let u = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    row |= 1 << position[u];
                }
                row
            })
            .collect();
        let Some(first) = &self.first else {
            let leaf = Leaf { path: path.to_vec(), order, code };
            self.best = Some(Leaf { path: leaf.path.clone(), order: leaf.order.clone(), code: leaf.code.clone() });
            self.first = Some(leaf);
            return Step::Continue;
        };
        if code == first.code {
            let aut = automorphism(&first.order, &order);
            let level = common_prefix(&first.path, path);
            self.push_generator(aut);
            return Step::JumpTo(level);
        }
        let best = self.best.as_ref().unwrap();
        match code.cmp(&best.code) {
            Ordering::Greater => {
                self.best = Some(Leaf { path: path.to_vec(), order, code });
                Step::Continue
            }
            Ordering::Equal => {
                let aut = automorphism(&best.order, &order);
                let level = common_prefix(&best.path, path);
                self.push_generator(aut);
                Step::JumpTo(level)
            }
            Ordering::Less => Step::Continue,
        }
    }

    fn push_generator(&mut self, aut: Vec<u8>) {
        if aut.iter().enumerate().any(|(i, &v)| i as u8 != v) {
            self.generators.push(aut);
        }
    }
}

fn automorphism(from: &[u8], to: &[u8]) -> Vec<u8> {
    let mut map = vec![0u8; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        map[a as usize] = b;
    }
    map
}

fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Orbit representative (smallest member) of each point under the group
/// generated by `gens`.
pub fn orbits<'a>(n: usize, gens: impl Iterator<Item = &'a Vec<u8>>) -> Vec<u8> {
    let mut parent: Vec<u8> = (0..n as u8).collect();
    fn find(p: &mut [u8], mut x: u8) -> u8 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    for g in gens {
        for (i, &j) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, i as u8), find(&mut parent, j));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    (0..n as u8).map(|x| find(&mut parent, x)).collect()
}

/// Sign of the permutation that a vertex map induces on an edge set.
pub fn edge_permutation_sign(edges: &[Edge], map: &[u8]) -> i8 {
    let mapped: Vec<Edge> = edges
        .iter()
        .map(|&(a, b)| {
            let (a, b) = (map[a as usize], map[b as usize]);
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    permutation_sign_of_sequence(&mapped) * permutation_sign_of_sequence(edges)
}

/// Canonical key of an isomorphism class: the graph6 string of the
/// canonically relabeled graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonKey(String);

impl CanonKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The canonical representative, edges in lexicographic order.
    pub fn graph(&self) -> SimpleGraph {
        graph6::decode(&self.0).expect("canonical keys are valid graph6")
    }

    /// Wraps a graph6 string without canonicalizing it; callers must pass
    /// a string produced by [`canonical_form`].
    pub fn from_canonical_graph6(s: impl Into<String>) -> Self {
        CanonKey(s.into())
    }
}

impl fmt::Display for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonKey({})", self.0)
    }
}

/// An oriented graph `(γ, o)` reduced modulo isomorphism and orientation
/// change: `(γ, o) = sign · (canonical graph, lexicographic edge order)`.
#[derive(Clone, Debug)]
pub struct CanonicalClass {
    pub key: CanonKey,
    pub sign: i8,
    pub is_zero: bool,
    pub aut_generators: Vec<Vec<u8>>,
    /// `labeling[v]` is the canonical position of input vertex `v`.
    pub labeling: Vec<u8>,
    aut_order: BigUint,
}

impl CanonicalClass {
    pub fn aut_order(&self) -> &BigUint {
        &self.aut_order
    }

    /// Signed coefficient of this term relative to the canonical basis
    /// vector, or 0 for orientation-zero classes.
    pub fn signed(&self) -> i8 {
        if self.is_zero {
            0
        } else {
            self.sign
        }
    }
}

pub fn canonical_form(g: &SimpleGraph) -> CanonicalClass {
    let lab = canonical_labeling(g.adjacency(), None);
    class_from_labeling(g, lab)
}

pub(crate) fn class_from_labeling(g: &SimpleGraph, lab: Labeling) -> CanonicalClass {
    let relabeled = g.relabel(&lab.position);
    let sign = permutation_sign_of_sequence(relabeled.edges());
    let (canon, _) = relabeled.sorted_edges();
    let is_zero = lab.generators.iter().any(|a| edge_permutation_sign(g.edges(), a) < 0);
    let aut_order = lab.group_order();
    CanonicalClass {
        key: CanonKey(graph6::encode(&canon)),
        sign,
        is_zero,
        aut_generators: lab.generators,
        labeling: lab.position,
        aut_order,
    }
}

/// Whether some automorphism induces an odd permutation of the edges.
pub fn has_odd_automorphism(g: &SimpleGraph) -> bool {
    canonical_form(g).is_zero
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k33() -> SimpleGraph {
        let mut e = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                e.push((a, b));
            }
        }
        SimpleGraph::new(6, &e).unwrap()
    }

    #[test]
    fn k4_is_nonzero_with_full_symmetric_group() {
        let c = canonical_form(&SimpleGraph::complete(4));
        assert!(!c.is_zero);
        assert_eq!(c.aut_order(), &BigUint::from(24u32));
        assert_eq!(c.key.as_str(), "C~");
    }

    #[test]
    fn k33_is_zero() {
        let c = canonical_form(&k33());
        assert!(c.is_zero);
        assert_eq!(c.aut_order(), &BigUint::from(72u32));
        // the explicit odd automorphism: swap 0 and 1
        assert_eq!(edge_permutation_sign(k33().edges(), &[1, 0, 2, 3, 4, 5]), -1);
    }

    #[test]
    fn empty_graph_group_order() {
        let c = canonical_form(&SimpleGraph::empty(9));
        assert_eq!(c.aut_order(), &BigUint::from(362880u32));
    }

    #[test]
    fn relabeled_copies_share_key() {
        let g = SimpleGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 2), (1, 4)]).unwrap();
        let k = canonical_form(&g).key;
        let h = g.relabel(&[3, 0, 4, 1, 2]);
        assert_eq!(canonical_form(&h).key, k);
    }

    #[test]
    fn swapping_two_edges_flips_sign() {
        let g = SimpleGraph::complete(4);
        let swapped = g.reorder_edges(&[1, 0, 2, 3, 4, 5]);
        assert_eq!(canonical_form(&g).sign, -canonical_form(&swapped).sign);
    }

    #[test]
    fn colors_pin_cells_in_order() {
        // path 0-1-2 with the endpoint 2 colored apart
        let g = SimpleGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let lab = canonical_labeling(g.adjacency(), Some(&[0, 0, 1]));
        assert_eq!(lab.order[2], 2);
        assert!(lab.generators.is_empty());
    }
}
