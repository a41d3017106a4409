//! Orderly generation of ≥3-valent connected simple graphs and the bases of
//! the full, biconnected and triconnected complexes.
//!
//! Generation is canonical augmentation by edges: starting from the empty
//! graph on `r` vertices, children are formed by adding one non-edge per
//! orbit of the parent's automorphism group, and a child is accepted only if
//! the added edge lies in the orbit of its canonical deletion edge. Every
//! isomorphism class is then produced exactly once.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, canonical_labeling, CanonKey, Labeling};
use crate::connectivity::connectivity_class;
use crate::error::ImportError;
use crate::graph::{Edge, SimpleGraph};
use crate::graph6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Full,
    Bi,
    Tri,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Full, Variant::Bi, Variant::Tri];

    /// Minimal connectivity class of graphs that survive in the quotient.
    pub fn threshold(self) -> u8 {
        match self {
            Variant::Full => 1,
            Variant::Bi => 2,
            Variant::Tri => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::Bi => "bi",
            Variant::Tri => "tri",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(Variant::Full),
            "bi" | "biconnected" => Ok(Variant::Bi),
            "tri" | "triconnected" => Ok(Variant::Tri),
            _ => Err(format!("unknown variant {s:?} (expected full, bi or tri)")),
        }
    }
}

/// All isomorphism classes of connected simple graphs with `r` vertices,
/// `k` edges and minimal valence 3, orientation-zero classes included.
/// Sorted by key.
pub fn generate(r: usize, k: usize) -> Vec<CanonKey> {
    if r == 0 || r > 62 || 3 * r > 2 * k || k > r * (r - 1) / 2 {
        return Vec::new();
    }
    let root = SimpleGraph::empty(r);
    let lab = canonical_labeling(root.adjacency(), None);
    let mut out = grow(&root, &lab, k);
    out.sort_unstable();
    debug_assert!(out.windows(2).all(|w| w[0] != w[1]), "orderly generation produced a duplicate");
    out
}

fn deficit(g: &SimpleGraph) -> usize {
    (0..g.vertex_count()).map(|v| 3usize.saturating_sub(g.degree(v))).sum()
}

fn grow(g: &SimpleGraph, lab: &Labeling, k: usize) -> Vec<CanonKey> {
    let m = g.edge_count();
    if m == k {
        return if g.min_degree() >= 3 && g.is_connected() {
            let (canon, _) = g.relabel(&lab.position).sorted_edges();
            vec![CanonKey::from_canonical_graph6(graph6::encode(&canon))]
        } else {
            Vec::new()
        };
    }
    let n = g.vertex_count();
    // one representative non-edge per orbit of Aut(g)
    let non_edges: Vec<Edge> = (0..n as u8)
        .flat_map(|u| (u + 1..n as u8).map(move |v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u as usize, v as usize))
        .collect();
    let reps = edge_orbit_representatives(&non_edges, &lab.generators);
    let children: Vec<(SimpleGraph, Labeling)> = reps
        .into_iter()
        .filter_map(|(u, v)| {
            let mut edges = g.edges().to_vec();
            edges.push((u, v));
            let h = SimpleGraph::from_normalized(n, edges);
            if deficit(&h) > 2 * (k - m - 1) {
                return None;
            }
            accept(&h, (u, v))
        })
        .collect();
    if m < 6 {
        children.par_iter().flat_map_iter(|(h, l)| grow(h, l, k)).collect()
    } else {
        children.iter().flat_map(|(h, l)| grow(h, l, k)).collect()
    }
}

/// Keeps the first edge of each orbit of the group generated by `gens`.
fn edge_orbit_representatives(edges: &[Edge], gens: &[Vec<u8>]) -> Vec<Edge> {
    if gens.is_empty() {
        return edges.to_vec();
    }
    let index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut uf = UnionFind::new(edges.len());
    for g in gens {
        for (i, &(a, b)) in edges.iter().enumerate() {
            let (x, y) = (g[a as usize], g[b as usize]);
            uf.union(i, index[&if x < y { (x, y) } else { (y, x) }]);
        }
    }
    edges.iter().enumerate().filter(|&(i, _)| uf.find(i) == i).map(|(_, &e)| e).collect()
}

/// Union-find whose roots are the smallest members.
struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (x, y) = (self.find(a), self.find(b));
        if x != y {
            self.0[x.max(y)] = x.min(y);
        }
    }
}

/// Invariant used to pick the canonical deletion edge.
fn edge_invariant(g: &SimpleGraph, (a, b): Edge) -> (usize, usize) {
    let (da, db) = (g.degree(a as usize), g.degree(b as usize));
    (da.max(db), da.min(db))
}

/// Accepts `h` if `added` is in the automorphism orbit of the canonical
/// deletion edge of `h`.
fn accept(h: &SimpleGraph, added: Edge) -> Option<(SimpleGraph, Labeling)> {
    let f = edge_invariant(h, added);
    let best_f = h.edges().iter().map(|&e| edge_invariant(h, e)).max().unwrap();
    if f < best_f {
        return None;
    }
    let lab = canonical_labeling(h.adjacency(), None);
    let image = |(a, b): Edge| {
        let (x, y) = (lab.position[a as usize], lab.position[b as usize]);
        if x < y {
            (y, x)
        } else {
            (x, y)
        }
    };
    let chosen = h
        .edges()
        .iter()
        .copied()
        .filter(|&e| edge_invariant(h, e) == best_f)
        .max_by_key(|&e| image(e))
        .unwrap();
    if chosen == added {
        return Some((h.clone(), lab));
    }
    let orb = edge_orbits(h, &lab.generators);
    let ia = h.edge_index(added.0 as usize, added.1 as usize).unwrap();
    let ic = h.edge_index(chosen.0 as usize, chosen.1 as usize).unwrap();
    (orb[ia] == orb[ic]).then(|| (h.clone(), lab))
}

fn edge_orbits(g: &SimpleGraph, gens: &[Vec<u8>]) -> Vec<usize> {
    let mut uf = UnionFind::new(g.edge_count());
    for gen in gens {
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            uf.union(i, g.edge_index(gen[a as usize] as usize, gen[b as usize] as usize).unwrap());
        }
    }
    (0..g.edge_count()).map(|i| uf.find(i)).collect()
}

/// Basis of one graded piece `(g, r)` of a complex variant: nonzero
/// classes above the variant's connectivity threshold, sorted by key.
#[derive(Clone, Debug)]
pub struct Basis {
    pub loop_order: i64,
    pub vertex_count: usize,
    pub variant: Variant,
    pub keys: Vec<CanonKey>,
    index: HashMap<CanonKey, usize>,
}

impl Basis {
    fn from_keys(loop_order: i64, vertex_count: usize, variant: Variant, mut keys: Vec<CanonKey>) -> Basis {
        keys.sort_unstable();
        keys.dedup();
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Basis { loop_order, vertex_count, variant, keys, index }
    }

    pub fn edge_count(&self) -> i64 {
        self.loop_order + self.vertex_count as i64 - 1
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn position(&self, key: &CanonKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn contains(&self, key: &CanonKey) -> bool {
        self.index.contains_key(key)
    }

    /// Newline-terminated graph6 lines in basis order.
    pub fn to_graph6_stream(&self) -> String {
        self.keys.iter().map(|k| format!("{k}\n")).collect()
    }

    /// Reads graphs from a graph6 stream (one per line, blank lines and
    /// `>>graph6<<` headers ignored). Every graph must have the grade's vertex
    /// and edge counts, be connected and ≥3-valent; orientation-zero classes
    /// and classes below the variant's threshold are dropped, and isomorphic
    /// duplicates are merged.
    pub fn import_graph6(loop_order: i64, vertex_count: usize, variant: Variant, text: &str) -> Result<Basis, ImportError> {
        let k = loop_order + vertex_count as i64 - 1;
        let mut keys = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.trim().trim_start_matches(">>graph6<<");
            if s.is_empty() {
                continue;
            }
            let g = graph6::decode(s).map_err(|source| ImportError::Graph6 { line, source })?;
            let fail = |reason: String| Err(ImportError::Constraint { line, reason });
            if g.vertex_count() != vertex_count || g.edge_count() as i64 != k {
                return fail(format!(
                    "expected {vertex_count} vertices and {k} edges, found {} and {}",
                    g.vertex_count(),
                    g.edge_count()
                ));
            }
            if !g.is_connected() {
                return fail("graph is disconnected".into());
            }
            if g.min_degree() < 3 {
                return fail(format!("graph has a vertex of valence {}", g.min_degree()));
            }
            if let Some(key) = admissible(&g, variant) {
                keys.push(key);
            }
        }
        Ok(Basis::from_keys(loop_order, vertex_count, variant, keys))
    }
}

fn admissible(g: &SimpleGraph, variant: Variant) -> Option<CanonKey> {
    let c = canonical_form(g);
    if c.is_zero {
        return None;
    }
    if variant != Variant::Full && connectivity_class(g).ok()? < variant.threshold() {
        return None;
    }
    Some(c.key)
}

pub fn build_basis(loop_order: i64, vertex_count: usize, variant: Variant) -> Basis {
    let k = loop_order + vertex_count as i64 - 1;
    let keys = if k < 0 {
        Vec::new()
    } else {
        generate(vertex_count, k as usize)
            .into_par_iter()
            .filter_map(|key| admissible(&key.graph(), variant))
            .collect()
    };
    Basis::from_keys(loop_order, vertex_count, variant, keys)
}

/// Bases of all three variants from one generation run.
pub fn build_all_bases(loop_order: i64, vertex_count: usize) -> [Basis; 3] {
    let k = loop_order + vertex_count as i64 - 1;
    let classified: Vec<(CanonKey, u8)> = if k < 0 {
        Vec::new()
    } else {
        generate(vertex_count, k as usize)
            .into_par_iter()
            .filter_map(|key| {
                let g = key.graph();
                if canonical_form(&g).is_zero {
                    return None;
                }
                let class = connectivity_class(&g).expect("generated graphs are connected with r >= 4");
                Some((key, class))
            })
            .collect()
    };
    Variant::ALL.map(|v| {
        let keys = classified.iter().filter(|(_, c)| *c >= v.threshold()).map(|(k, _)| k.clone()).collect();
        Basis::from_keys(loop_order, vertex_count, v, keys)
    })
}
