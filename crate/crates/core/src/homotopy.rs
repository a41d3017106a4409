//! Graphs with ordered R leaves, the differential `d′` contracting S-owned
//! edges, the homotopy `h` and the identity `d′h + hd′ = N_γ γ`.
//!
//! Leaf labels travel with the real edges of each leaf: neither operation
//! touches an R skeleton, so after each step the leaf is found again as the
//! R node owning the transported edge set. For canonical forms a labeled
//! graph is augmented with one marker vertex per label, joined to the
//! skeleton vertices of its leaf and colored by the label.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_labeling, edge_permutation_sign};
use crate::connectivity::is_triconnected;
use crate::error::{ConnectivityError, HomotopyError};
use crate::formal::FormalSum;
use crate::graph::{permutation_sign_of_sequence, Contraction, Edge, SimpleGraph};
use crate::graph6;
use crate::spqr::{NodeKind, SkeletonEdge, SpqrTree};

#[derive(Clone, Debug)]
pub struct LabeledGraph {
    graph: SimpleGraph,
    tree: SpqrTree,
    /// Node ids of the R leaves, in label order.
    leaves: Vec<usize>,
}

/// Canonical key of a labeled class: leaf count and the graph6 string of
/// the canonically relabeled marker-augmented graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabeledKey(String);

pub type LabeledSum = FormalSum<LabeledKey>;

impl fmt::Display for LabeledKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for LabeledKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledKey({})", self.0)
    }
}

/// Reduction of an oriented labeled graph to its class.
#[derive(Clone, Debug)]
pub struct LabeledClass {
    pub key: LabeledKey,
    pub sign: i8,
    pub is_zero: bool,
}

impl LabeledClass {
    pub fn signed(&self) -> i64 {
        if self.is_zero {
            0
        } else {
            self.sign as i64
        }
    }
}

fn mask_of(vertices: &[u8]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | 1 << v)
}

impl LabeledGraph {
    /// Labels the R leaves of `g` in the given order of node ids, or by
    /// increasing node id.
    pub fn new(g: &SimpleGraph, order: Option<&[usize]>) -> Result<LabeledGraph, HomotopyError> {
        if is_triconnected(g) {
            return Err(ConnectivityError::Triconnected.into());
        }
        let tree = SpqrTree::build(g)?;
        let mut r_leaves: Vec<usize> =
            tree.leaves().into_iter().filter(|&id| tree.node(id).kind == NodeKind::R).collect();
        r_leaves.sort_unstable();
        let leaves = match order {
            None => r_leaves,
            Some(order) => {
                if order.len() != r_leaves.len() {
                    return Err(HomotopyError::LabelCount { expected: r_leaves.len(), found: order.len() });
                }
                if let Some(&bad) = order.iter().find(|id| !r_leaves.contains(id)) {
                    return Err(HomotopyError::NotALeaf(bad));
                }
                let mut seen = order.to_vec();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() != order.len() {
                    return Err(HomotopyError::LabelCount { expected: r_leaves.len(), found: seen.len() });
                }
                order.to_vec()
            }
        };
        if leaves.len() < 2 {
            return Err(HomotopyError::LabelCount { expected: 2, found: leaves.len() });
        }
        Ok(LabeledGraph { graph: g.clone(), tree, leaves })
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn tree(&self) -> &SpqrTree {
        &self.tree
    }

    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// The same graph with `first` moved to the front of the label order.
    pub fn with_first_leaf(&self, first: usize) -> Result<LabeledGraph, HomotopyError> {
        if !self.leaves.contains(&first) {
            return Err(HomotopyError::NotALeaf(first));
        }
        let mut order = vec![first];
        order.extend(self.leaves.iter().copied().filter(|&l| l != first));
        Ok(LabeledGraph { graph: self.graph.clone(), tree: self.tree.clone(), leaves: order })
    }

    /// The unique tree neighbor of the first leaf.
    pub fn first_neighbor(&self) -> usize {
        self.tree.neighbors(self.leaves[0])[0]
    }

    fn leaf_edges(&self) -> Vec<Vec<usize>> {
        self.leaves
            .iter()
            .map(|&id| self.tree.node(id).real_edges.iter().map(|r| r.index).collect())
            .collect()
    }

    /// Rebuilds the tree of `graph` and finds each leaf as the R leaf owning
    /// exactly the given real edges.
    fn transported(graph: SimpleGraph, leaf_edges: &[Vec<usize>]) -> Result<LabeledGraph, HomotopyError> {
        let tree = SpqrTree::build(&graph)?;
        let mut leaves = Vec::with_capacity(leaf_edges.len());
        for edges in leaf_edges {
            let (owner, kind) = tree.edge_owner(edges[0])?;
            let node = tree.node(owner);
            let mut own: Vec<usize> = node.real_edges.iter().map(|r| r.index).collect();
            own.sort_unstable();
            let mut want = edges.clone();
            want.sort_unstable();
            if kind != NodeKind::R || node.virtual_edges.len() != 1 || own != want {
                return Err(HomotopyError::LostLeaf);
            }
            leaves.push(owner);
        }
        Ok(LabeledGraph { graph, tree, leaves })
    }

    /// The class of this graph with its own edge order as orientation.
    pub fn class(&self) -> LabeledClass {
        let n = self.graph.vertex_count();
        let k = self.leaves.len();
        let mut adj: Vec<u64> = self.graph.adjacency().to_vec();
        let mut colors = vec![0u32; n];
        let mut marker_edges: Vec<(usize, usize)> = Vec::new();
        for (i, &leaf) in self.leaves.iter().enumerate() {
            let m = mask_of(&self.tree.node(leaf).skeleton_vertices);
            let marker = n + i;
            for v in 0..n {
                if m >> v & 1 == 1 {
                    adj[v] |= 1 << marker;
                    marker_edges.push((v, marker));
                }
            }
            adj.push(m);
            colors.push(i as u32 + 1);
        }
        let lab = canonical_labeling(&adj, Some(&colors));
        let pos = &lab.position[..n];
        let relabeled = self.graph.relabel(pos);
        let sign = permutation_sign_of_sequence(relabeled.edges());
        let is_zero = lab.generators.iter().any(|a| edge_permutation_sign(self.graph.edges(), &a[..n]) < 0);
        let mut all: Vec<(usize, usize)> =
            self.graph.edges().iter().map(|&(a, b)| (a as usize, b as usize)).collect();
        all.extend(marker_edges);
        let augmented = SimpleGraph::new(n + k, &all).expect("markers are new vertices");
        let (canon, _) = augmented.relabel(&lab.position).sorted_edges();
        LabeledClass { key: LabeledKey(format!("{k}:{}", graph6::encode(&canon))), sign, is_zero }
    }
}

impl LabeledKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The canonical representative (lexicographic edge order) with its
    /// labels.
    pub fn decode(&self) -> Result<LabeledGraph, HomotopyError> {
        let malformed = || HomotopyError::Connectivity(ConnectivityError::Malformed(format!("bad labeled key {}", self.0)));
        let (k, g6) = self.0.split_once(':').ok_or_else(malformed)?;
        let k: usize = k.parse().map_err(|_| malformed())?;
        let augmented = graph6::decode(g6).map_err(|_| malformed())?;
        let n = augmented.vertex_count().checked_sub(k).ok_or_else(malformed)?;
        let (graph, _) = augmented.induced((1u64 << n) - 1);
        let tree = SpqrTree::build(&graph)?;
        let mut leaves = Vec::with_capacity(k);
        for i in 0..k {
            let m = augmented.neighbors(n + i);
            let leaf = tree
                .leaves()
                .into_iter()
                .find(|&id| tree.node(id).kind == NodeKind::R && mask_of(&tree.node(id).skeleton_vertices) == m)
                .ok_or(HomotopyError::LostLeaf)?;
            leaves.push(leaf);
        }
        Ok(LabeledGraph { graph, tree, leaves })
    }
}

/// Labels the R leaves of `g` by increasing node id.
pub fn to_labeled(g: &SimpleGraph) -> Result<LabeledGraph, HomotopyError> {
    LabeledGraph::new(g, None)
}

/// `N_γ`: the number of virtual edges of the first leaf's neighbor if it is
/// an S node, otherwise 2.
pub fn n_value(x: &LabeledGraph) -> usize {
    let w = x.tree.node(x.first_neighbor());
    match w.kind {
        NodeKind::S => w.virtual_edges.len(),
        NodeKind::P | NodeKind::R => 2,
    }
}

/// Which S-owned edges a restricted `d′` contracts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeScope {
    /// All S-owned real edges.
    All,
    /// Real edges of the first leaf's neighbor, when it is an S node.
    Adjacent,
    /// S-owned real edges elsewhere.
    Elsewhere,
}

/// Terms of `d′(x)` with `x`'s edge order as orientation.
pub fn d_prime_terms(x: &LabeledGraph, scope: EdgeScope) -> Result<Vec<(LabeledGraph, i64)>, HomotopyError> {
    let w = x.first_neighbor();
    let leaf_edges = x.leaf_edges();
    let mut out = Vec::new();
    for j in 0..x.graph.edge_count() {
        let (owner, kind) = x.tree.edge_owner(j)?;
        let take = kind == NodeKind::S
            && match scope {
                EdgeScope::All => true,
                EdgeScope::Adjacent => owner == w,
                EdgeScope::Elsewhere => owner != w,
            };
        if !take {
            continue;
        }
        let Contraction::Graph(h) = x.graph.contract_edge(j) else { continue };
        let shifted: Vec<Vec<usize>> =
            leaf_edges.iter().map(|es| es.iter().map(|&i| if i > j { i - 1 } else { i }).collect()).collect();
        let y = LabeledGraph::transported(h, &shifted)?;
        out.push((y, if j % 2 == 0 { 1 } else { -1 }));
    }
    Ok(out)
}

/// Nodes on the far side of the tree edge from `from` to `to`.
fn branch(tree: &SpqrTree, from: usize, to: usize) -> Vec<usize> {
    let mut seen = vec![false; tree.nodes.len()];
    seen[from] = true;
    seen[to] = true;
    let mut stack = vec![to];
    let mut out = vec![to];
    while let Some(x) = stack.pop() {
        for y in tree.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
                out.push(y);
            }
        }
    }
    out
}

/// Splits vertex `w` into `w` (keeping the incident edges in `keep`) and a
/// new vertex taking the rest, joined by a new edge placed first.
fn split_corner(g: &SimpleGraph, w: u8, keep: &[usize]) -> Result<SimpleGraph, HomotopyError> {
    let n = g.vertex_count() as u8;
    let inc = g.incident_edges(w as usize);
    let kept = inc.iter().filter(|e| keep.contains(e)).count();
    let moved = inc.len() - kept;
    if kept < 2 || moved < 2 {
        return Err(HomotopyError::LowValence { valence: kept.min(moved) + 1, graph6: graph6::encode(g) });
    }
    let mut edges: Vec<Edge> = Vec::with_capacity(g.edge_count() + 1);
    edges.push((w, n));
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        if inc.contains(&i) && !keep.contains(&i) {
            let other = if a == w { b } else { a };
            edges.push((other, n));
        } else {
            edges.push((a, b));
        }
    }
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
    Ok(SimpleGraph::new(n as usize + 1, &pairs).expect("corner split stays simple"))
}

/// Terms of `h(x)` with `x`'s edge order as orientation (new edge first).
pub fn h_terms(x: &LabeledGraph) -> Result<Vec<(LabeledGraph, i64)>, HomotopyError> {
    let v = x.leaves[0];
    let w = x.first_neighbor();
    let tree = &x.tree;
    // (corner vertex, real edges kept at the old vertex)
    let mut corners: Vec<(u8, Vec<usize>)> = Vec::new();
    let real_edges_of = |nodes: &[usize]| -> Vec<usize> {
        nodes.iter().flat_map(|&id| tree.node(id).real_edges.iter().map(|r| r.index)).collect()
    };
    if tree.node(w).kind == NodeKind::S {
        let (verts, order) = tree.cycle(w);
        let m = verts.len();
        for i in 0..m {
            let prev = order[(i + m - 1) % m];
            let next = order[i];
            if let (SkeletonEdge::Virtual(p), SkeletonEdge::Virtual(_)) = (prev, next) {
                let twin = tree.node(w).virtual_edges[p].twin.0;
                corners.push((verts[i], real_edges_of(&branch(tree, w, twin))));
            }
        }
    } else {
        let (a, b) = tree.node(v).virtual_edges[0].endpoints;
        let own = real_edges_of(&[v]);
        corners.push((a, own.clone()));
        corners.push((b, own));
    }
    let leaf_edges: Vec<Vec<usize>> =
        x.leaf_edges().into_iter().map(|es| es.into_iter().map(|i| i + 1).collect()).collect();
    let mut out = Vec::with_capacity(corners.len());
    for (c, keep) in corners {
        let g = split_corner(&x.graph, c, &keep)?;
        out.push((LabeledGraph::transported(g, &leaf_edges)?, 1));
    }
    Ok(out)
}

fn collect(terms: Vec<(LabeledGraph, i64)>, scale: &BigRational, out: &mut LabeledSum) {
    for (y, c) in terms {
        let class = y.class();
        let s = class.signed() * c;
        if s != 0 {
            out.add_term(class.key, scale * BigRational::from_integer(s.into()));
        }
    }
}

fn linear(
    x: &LabeledSum,
    f: impl Fn(&LabeledGraph) -> Result<Vec<(LabeledGraph, i64)>, HomotopyError>,
) -> Result<LabeledSum, HomotopyError> {
    let mut out = LabeledSum::new();
    for (k, c) in x.iter() {
        collect(f(&k.decode()?)?, c, &mut out);
    }
    Ok(out)
}

pub fn apply_d_prime(x: &LabeledSum, scope: EdgeScope) -> Result<LabeledSum, HomotopyError> {
    linear(x, |y| d_prime_terms(y, scope))
}

pub fn apply_h(x: &LabeledSum) -> Result<LabeledSum, HomotopyError> {
    linear(x, h_terms)
}

/// `[x]` as a formal sum (empty for orientation-zero classes).
pub fn class_sum(x: &LabeledGraph) -> LabeledSum {
    let mut out = LabeledSum::new();
    collect(vec![(x.clone(), 1)], &BigRational::from_integer(1.into()), &mut out);
    out
}

/// `d′h(x) + h(d′x)` restricted to `scope`, evaluated from the explicit
/// representative `x`.
pub fn homotopy_side(x: &LabeledGraph, scope: EdgeScope) -> Result<LabeledSum, HomotopyError> {
    let one = BigRational::from_integer(1.into());
    let mut hx = LabeledSum::new();
    collect(h_terms(x)?, &one, &mut hx);
    let mut dx = LabeledSum::new();
    collect(d_prime_terms(x, scope)?, &one, &mut dx);
    Ok(&apply_d_prime(&hx, scope)? + &apply_h(&dx)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomotopyReport {
    pub graph6: String,
    pub leaf_count: usize,
    pub first_leaf: usize,
    pub n: usize,
    /// `d′h + hd′ = N·id` on this graph.
    pub pass: bool,
    /// `d_W h + h d_W = N·id` and `d″h + hd″ = 0` separately.
    pub split_pass: bool,
    pub zero_class: bool,
}

pub fn homotopy_check(x: &LabeledGraph) -> Result<HomotopyReport, HomotopyError> {
    let n = n_value(x);
    let target = class_sum(x).scaled(&BigRational::from_integer(n.into()));
    let total = homotopy_side(x, EdgeScope::All)?;
    let adjacent = homotopy_side(x, EdgeScope::Adjacent)?;
    let elsewhere = homotopy_side(x, EdgeScope::Elsewhere)?;
    Ok(HomotopyReport {
        graph6: graph6::encode(&x.graph),
        leaf_count: x.leaf_count(),
        first_leaf: x.leaves[0],
        n,
        pass: (&total - &target).is_zero(),
        split_pass: (&adjacent - &target).is_zero() && elsewhere.is_zero(),
        zero_class: target.is_zero(),
    })
}

/// [`homotopy_check`] for every choice of first leaf.
pub fn homotopy_check_all(g: &SimpleGraph) -> Result<Vec<HomotopyReport>, HomotopyError> {
    let base = to_labeled(g)?;
    base.leaves.iter().map(|&first| homotopy_check(&base.with_first_leaf(first)?)).collect()
}
