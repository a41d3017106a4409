//! SPQR trees of biconnected graphs.
//!
//! Construction splits recursively at the lexicographically least separation
//! pair of each split component (bonds collect the edges between the pair),
//! declares cycles S, bonds P and split-free components R, and finally fuses
//! adjacent S nodes and adjacent P nodes. The result is unique, so node ids
//! are assigned by sorting nodes on their contents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::connectivity::{is_biconnected, is_separation_pair, is_triconnected};
use crate::error::ConnectivityError;
use crate::graph::{Contraction, SimpleGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    S,
    P,
    R,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealEdge {
    /// Position of the edge in the graph's edge sequence.
    pub index: usize,
    pub endpoints: (u8, u8),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VirtualEdge {
    pub local_id: usize,
    pub endpoints: (u8, u8),
    /// `(node id, local id)` of the twin virtual edge.
    pub twin: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpqrNode {
    pub id: usize,
    pub kind: NodeKind,
    pub skeleton_vertices: Vec<u8>,
    pub real_edges: Vec<RealEdge>,
    pub virtual_edges: Vec<VirtualEdge>,
}

/// An edge of a skeleton: a real edge (by graph edge index) or a virtual
/// edge (by local id within its node).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SkeletonEdge {
    Real(usize),
    Virtual(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpqrTree {
    pub vertex_count: usize,
    pub nodes: Vec<SpqrNode>,
    pub tree_edges: Vec<(usize, usize)>,
}

/// Predicted effect of contracting a real edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContractionCase {
    /// Owned by a P node: the poles merge into a cut vertex.
    PKill,
    /// Owned by an S node whose cycle has length at least 4.
    SShrink,
    /// Owned by a triangle S node, which disappears; `fused_p` when both of
    /// its neighbors are P nodes and fuse into one.
    SMerge { fused_p: bool },
    /// Owned by an R node: the R weight strictly drops.
    RLocal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tag {
    Real(usize),
    Virtual(usize),
}

#[derive(Clone, Copy, Debug)]
struct MEdge {
    a: u8,
    b: u8,
    tag: Tag,
}

impl MEdge {
    fn joins(&self, a: u8, b: u8) -> bool {
        (self.a == a && self.b == b) || (self.a == b && self.b == a)
    }
}

fn vertex_mask(edges: &[MEdge]) -> u64 {
    edges.iter().fold(0, |m, e| m | 1 << e.a | 1 << e.b)
}

fn is_cycle(edges: &[MEdge]) -> bool {
    let mask = vertex_mask(edges);
    let nv = mask.count_ones() as usize;
    if nv < 3 || edges.len() != nv {
        return false;
    }
    let mut deg = [0u8; 64];
    for e in edges {
        deg[e.a as usize] += 1;
        deg[e.b as usize] += 1;
    }
    if (0..64).any(|v| mask >> v & 1 == 1 && deg[v] != 2) {
        return false;
    }
    // connected?
    let start = mask.trailing_zeros() as u8;
    let mut seen = 1u64 << start;
    loop {
        let before = seen;
        for e in edges {
            if seen >> e.a & 1 == 1 || seen >> e.b & 1 == 1 {
                seen |= 1 << e.a | 1 << e.b;
            }
        }
        if seen == before {
            break;
        }
    }
    seen == mask
}

/// Separation classes of `{a, b}`: edges grouped by the component of the
/// graph minus `{a, b}` they touch; each edge joining `a` and `b` is a class
/// of its own.
fn separation_classes(edges: &[MEdge], a: u8, b: u8) -> Vec<Vec<usize>> {
    let mut parent: Vec<u8> = (0..64).collect();
    fn find(p: &mut [u8], mut x: u8) -> u8 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let outside = |v: u8| v != a && v != b;
    for e in edges {
        if outside(e.a) && outside(e.b) {
            let (x, y) = (find(&mut parent, e.a), find(&mut parent, e.b));
            parent[x as usize] = y;
        }
    }
    let mut class_of_root: BTreeMap<u8, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        if e.joins(a, b) {
            classes.push(vec![i]);
            continue;
        }
        let x = if outside(e.a) { e.a } else { e.b };
        let root = find(&mut parent, x);
        let c = *class_of_root.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(i);
    }
    classes
}

fn is_split(classes: &[Vec<usize>]) -> bool {
    let c = classes.len();
    if c < 2 {
        return false;
    }
    if c == 2 && classes.iter().any(|k| k.len() == 1) {
        return false;
    }
    !(c == 3 && classes.iter().all(|k| k.len() == 1))
}

fn decompose(edges: Vec<MEdge>, next_virtual: &mut usize, out: &mut Vec<(NodeKind, Vec<MEdge>)>) {
    let mask = vertex_mask(&edges);
    if mask.count_ones() == 2 {
        out.push((NodeKind::P, edges));
        return;
    }
    if is_cycle(&edges) {
        out.push((NodeKind::S, edges));
        return;
    }
    let verts: Vec<u8> = (0..64u8).filter(|&v| mask >> v & 1 == 1).collect();
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            let classes = separation_classes(&edges, a, b);
            if !is_split(&classes) {
                continue;
            }
            let (direct, nontrivial): (Vec<_>, Vec<_>) =
                classes.into_iter().partition(|k| k.len() == 1 && edges[k[0]].joins(a, b));
            let mut bond: Vec<MEdge> = direct.iter().map(|k| edges[k[0]]).collect();
            if bond.is_empty() && nontrivial.len() == 2 {
                let id = *next_virtual;
                *next_virtual += 1;
                for class in nontrivial {
                    let mut part: Vec<MEdge> = class.iter().map(|&j| edges[j]).collect();
                    part.push(MEdge { a, b, tag: Tag::Virtual(id) });
                    decompose(part, next_virtual, out);
                }
                return;
            }
            for class in nontrivial {
                let id = *next_virtual;
                *next_virtual += 1;
                bond.push(MEdge { a, b, tag: Tag::Virtual(id) });
                let mut part: Vec<MEdge> = class.iter().map(|&j| edges[j]).collect();
                part.push(MEdge { a, b, tag: Tag::Virtual(id) });
                decompose(part, next_virtual, out);
            }
            out.push((NodeKind::P, bond));
            return;
        }
    }
    out.push((NodeKind::R, edges));
}

fn virtual_ids(edges: &[MEdge]) -> impl Iterator<Item = usize> + '_ {
    edges.iter().filter_map(|e| match e.tag {
        Tag::Virtual(id) => Some(id),
        Tag::Real(_) => None,
    })
}

fn fuse_same_kind(comps: &mut Vec<(NodeKind, Vec<MEdge>)>) {
    loop {
        let mut found = None;
        'search: for i in 0..comps.len() {
            if comps[i].0 == NodeKind::R {
                continue;
            }
            for j in i + 1..comps.len() {
                if comps[j].0 != comps[i].0 {
                    continue;
                }
                for id in virtual_ids(&comps[i].1) {
                    if virtual_ids(&comps[j].1).any(|x| x == id) {
                        found = Some((i, j, id));
                        break 'search;
                    }
                }
            }
        }
        let Some((i, j, id)) = found else { return };
        let (_, other) = comps.remove(j);
        let keep = |e: &MEdge| e.tag != Tag::Virtual(id);
        let mut merged: Vec<MEdge> = comps[i].1.iter().copied().filter(keep).collect();
        merged.extend(other.into_iter().filter(keep));
        comps[i].1 = merged;
    }
}

fn ordered(a: u8, b: u8) -> (u8, u8) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl SpqrTree {
    pub fn build(g: &SimpleGraph) -> Result<SpqrTree, ConnectivityError> {
        if !g.is_connected() {
            return Err(ConnectivityError::Disconnected);
        }
        if g.vertex_count() < 3 {
            return Err(ConnectivityError::TooSmall(g.vertex_count()));
        }
        if !is_biconnected(g) {
            return Err(ConnectivityError::NotBiconnected);
        }
        let edges: Vec<MEdge> =
            g.edges().iter().enumerate().map(|(i, &(a, b))| MEdge { a, b, tag: Tag::Real(i) }).collect();
        let mut comps = Vec::new();
        let mut next_virtual = 0;
        decompose(edges, &mut next_virtual, &mut comps);
        fuse_same_kind(&mut comps);
        Ok(Self::assemble(g.vertex_count(), comps))
    }

    fn assemble(vertex_count: usize, comps: Vec<(NodeKind, Vec<MEdge>)>) -> SpqrTree {
        type SortKey = (Vec<u8>, NodeKind, Vec<usize>, Vec<(u8, u8)>);
        let key = |(kind, edges): &(NodeKind, Vec<MEdge>)| -> SortKey {
            let mask = vertex_mask(edges);
            let verts = (0..64u8).filter(|&v| mask >> v & 1 == 1).collect();
            let mut real: Vec<usize> = edges
                .iter()
                .filter_map(|e| match e.tag {
                    Tag::Real(i) => Some(i),
                    Tag::Virtual(_) => None,
                })
                .collect();
            real.sort_unstable();
            let mut virt: Vec<(u8, u8)> = edges
                .iter()
                .filter(|e| matches!(e.tag, Tag::Virtual(_)))
                .map(|e| ordered(e.a, e.b))
                .collect();
            virt.sort_unstable();
            (verts, *kind, real, virt)
        };
        let mut keyed: Vec<(SortKey, (NodeKind, Vec<MEdge>))> = comps.into_iter().map(|c| (key(&c), c)).collect();
        keyed.sort_by(|x, y| x.0.cmp(&y.0));

        // owners of each virtual id
        let mut owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (node, (_, (_, edges))) in keyed.iter().enumerate() {
            for id in virtual_ids(edges) {
                owners.entry(id).or_default().push(node);
            }
        }
        // local ids: sorted by (endpoints, twin node)
        let mut local: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut nodes = Vec::with_capacity(keyed.len());
        for (node, (k, (kind, edges))) in keyed.iter().enumerate() {
            let mut virt: Vec<((u8, u8), usize, usize)> = edges
                .iter()
                .filter_map(|e| match e.tag {
                    Tag::Virtual(id) => {
                        let other = owners[&id].iter().copied().find(|&o| o != node).expect("virtual edge has a twin");
                        Some((ordered(e.a, e.b), other, id))
                    }
                    Tag::Real(_) => None,
                })
                .collect();
            virt.sort_unstable();
            for (lid, &(_, _, id)) in virt.iter().enumerate() {
                local.insert((node, id), lid);
            }
            let mut real: Vec<RealEdge> = edges
                .iter()
                .filter_map(|e| match e.tag {
                    Tag::Real(i) => Some(RealEdge { index: i, endpoints: ordered(e.a, e.b) }),
                    Tag::Virtual(_) => None,
                })
                .collect();
            real.sort_by_key(|r| r.index);
            nodes.push(SpqrNode {
                id: node,
                kind: *kind,
                skeleton_vertices: k.0.clone(),
                real_edges: real,
                virtual_edges: virt
                    .iter()
                    .enumerate()
                    .map(|(lid, &(ends, other, _))| VirtualEdge { local_id: lid, endpoints: ends, twin: (other, 0) })
                    .collect(),
            });
        }
        // fill twin local ids
        let mut tree_edges = Vec::new();
        for (&id, own) in &owners {
            let (x, y) = (own[0], own[1]);
            let (lx, ly) = (local[&(x, id)], local[&(y, id)]);
            nodes[x].virtual_edges[lx].twin = (y, ly);
            nodes[y].virtual_edges[ly].twin = (x, lx);
            tree_edges.push(ordered_usize(x, y));
        }
        tree_edges.sort_unstable();
        SpqrTree { vertex_count, nodes, tree_edges }
    }

    pub fn node(&self, id: usize) -> &SpqrNode {
        &self.nodes[id]
    }

    pub fn neighbors(&self, id: usize) -> Vec<usize> {
        self.nodes[id].virtual_edges.iter().map(|v| v.twin.0).collect()
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.nodes.iter().filter(|n| n.virtual_edges.len() == 1).map(|n| n.id).collect()
    }

    /// Total number of real edges in R skeleta.
    pub fn r_edge_weight(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::R).map(|n| n.real_edges.len()).sum()
    }

    pub fn edge_owner(&self, e: usize) -> Result<(usize, NodeKind), ConnectivityError> {
        self.nodes
            .iter()
            .find(|n| n.real_edges.iter().any(|r| r.index == e))
            .map(|n| (n.id, n.kind))
            .ok_or(ConnectivityError::UnknownEdge(e))
    }

    pub fn skeleton_edges(&self, id: usize) -> Vec<(SkeletonEdge, (u8, u8))> {
        let n = &self.nodes[id];
        let mut out: Vec<_> = n.real_edges.iter().map(|r| (SkeletonEdge::Real(r.index), r.endpoints)).collect();
        out.extend(n.virtual_edges.iter().map(|v| (SkeletonEdge::Virtual(v.local_id), v.endpoints)));
        out
    }

    /// Skeleton edges of an S node in cyclic order, together with the
    /// vertex sequence: edge `i` joins `vertices[i]` and `vertices[i + 1]`
    /// (cyclically). Starts at the smallest vertex.
    pub fn cycle(&self, id: usize) -> (Vec<u8>, Vec<SkeletonEdge>) {
        assert_eq!(self.nodes[id].kind, NodeKind::S);
        let mut pool = self.skeleton_edges(id);
        pool.sort_by_key(|&(tag, (a, b))| (a.min(b), a.max(b), tag));
        let start = self.nodes[id].skeleton_vertices[0];
        let mut verts = vec![start];
        let mut order = Vec::new();
        let mut at = start;
        while !pool.is_empty() {
            let pos = pool
                .iter()
                .enumerate()
                .filter(|(_, (_, (a, b)))| *a == at || *b == at)
                .min_by_key(|(_, &(tag, (a, b)))| (if a == at { b } else { a }, tag))
                .map(|(i, _)| i)
                .expect("S skeleton is a cycle");
            let (tag, (a, b)) = pool.remove(pos);
            order.push(tag);
            at = if a == at { b } else { a };
            if !pool.is_empty() {
                verts.push(at);
            }
        }
        (verts, order)
    }

    /// Glues the skeleta along twin virtual edges and removes those edges.
    pub fn recompose(&self) -> Result<SimpleGraph, ConnectivityError> {
        self.check_twins()?;
        let mut real: Vec<&RealEdge> = self.nodes.iter().flat_map(|n| n.real_edges.iter()).collect();
        real.sort_by_key(|r| r.index);
        for (i, r) in real.iter().enumerate() {
            if r.index != i {
                return Err(ConnectivityError::Malformed(format!("real edge indices are not 0..{}", real.len())));
            }
        }
        let pairs: Vec<(usize, usize)> = real.iter().map(|r| (r.endpoints.0 as usize, r.endpoints.1 as usize)).collect();
        SimpleGraph::new(self.vertex_count, &pairs).map_err(|e| ConnectivityError::Malformed(e.to_string()))
    }

    fn check_twins(&self) -> Result<(), ConnectivityError> {
        let bad = |msg: String| Err(ConnectivityError::Malformed(msg));
        let mut links = Vec::new();
        for n in &self.nodes {
            for v in &n.virtual_edges {
                let (t, tl) = v.twin;
                let Some(other) = self.nodes.get(t).and_then(|m| m.virtual_edges.get(tl)) else {
                    return bad(format!("node {} virtual {} has a dangling twin", n.id, v.local_id));
                };
                if other.twin != (n.id, v.local_id) {
                    return bad(format!("twin of node {} virtual {} does not point back", n.id, v.local_id));
                }
                if ordered(other.endpoints.0, other.endpoints.1) != ordered(v.endpoints.0, v.endpoints.1) {
                    return bad(format!("twin endpoints differ at node {}", n.id));
                }
                if n.id < t {
                    links.push((n.id, t));
                }
            }
        }
        links.sort_unstable();
        if links != self.tree_edges {
            return bad("tree edges do not match twin links".into());
        }
        Ok(())
    }

    /// Checks every structural invariant of the tree against `g`.
    pub fn validate(&self, g: &SimpleGraph) -> Result<(), ConnectivityError> {
        let bad = |msg: String| Err(ConnectivityError::Malformed(msg));
        self.check_twins()?;
        if self.tree_edges.len() + 1 != self.nodes.len() {
            return bad("tree edge count is not node count minus one".into());
        }
        // connected tree
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("tree is disconnected".into());
        }
        for n in &self.nodes {
            let skel = self.skeleton_edges(n.id);
            let mask = skel.iter().fold(0u64, |m, (_, (a, b))| m | 1 << a | 1 << b);
            let verts: Vec<u8> = (0..64u8).filter(|&v| mask >> v & 1 == 1).collect();
            if verts != n.skeleton_vertices {
                return bad(format!("node {} vertex set differs from its edges", n.id));
            }
            let medges: Vec<MEdge> = skel.iter().map(|&(_, (a, b))| MEdge { a, b, tag: Tag::Real(0) }).collect();
            let ok = match n.kind {
                NodeKind::S => is_cycle(&medges),
                NodeKind::P => verts.len() == 2 && skel.len() >= 3,
                NodeKind::R => {
                    let mut pairs: Vec<(usize, usize)> = Vec::new();
                    for &(_, (a, b)) in &skel {
                        let (x, y) = (verts.binary_search(&a).unwrap(), verts.binary_search(&b).unwrap());
                        pairs.push((x, y));
                    }
                    verts.len() >= 4
                        && SimpleGraph::new(verts.len(), &pairs).map(|s| is_triconnected(&s)).unwrap_or(false)
                }
            };
            if !ok {
                return bad(format!("node {} is not a valid {:?} skeleton", n.id, n.kind));
            }
            for y in self.neighbors(n.id) {
                let k = self.nodes[y].kind;
                if k == n.kind && k != NodeKind::R {
                    return bad(format!("adjacent {:?} nodes {} and {}", k, n.id, y));
                }
            }
            for v in &n.virtual_edges {
                if !is_separation_pair(g, v.endpoints.0 as usize, v.endpoints.1 as usize) {
                    return bad(format!("virtual edge {:?} of node {} is not a separation pair", v.endpoints, n.id));
                }
            }
        }
        let mut owner = vec![usize::MAX; g.edge_count()];
        for n in &self.nodes {
            for r in &n.real_edges {
                if r.index >= owner.len() || owner[r.index] != usize::MAX {
                    return bad(format!("real edge {} is missing or repeated", r.index));
                }
                let (a, b) = g.edge(r.index);
                if r.endpoints != (a, b) {
                    return bad(format!("real edge {} has wrong endpoints", r.index));
                }
                owner[r.index] = n.id;
            }
        }
        if owner.contains(&usize::MAX) {
            return bad("real edges do not cover the graph".into());
        }
        let cover = self.nodes.iter().flat_map(|n| n.skeleton_vertices.iter()).fold(0u64, |m, &v| m | 1 << v);
        if cover != g.all_vertices() {
            return bad("skeleta do not cover the vertices".into());
        }
        if g.min_degree() >= 3 && self.nodes.len() > 1 {
            for l in self.leaves() {
                if self.nodes[l].kind != NodeKind::R {
                    return bad(format!("leaf {} is a {:?} node", l, self.nodes[l].kind));
                }
            }
        }
        Ok(())
    }

    pub fn contraction_case(&self, e: usize) -> Result<ContractionCase, ConnectivityError> {
        let (id, kind) = self.edge_owner(e)?;
        Ok(match kind {
            NodeKind::P => ContractionCase::PKill,
            NodeKind::R => ContractionCase::RLocal,
            NodeKind::S => {
                let n = &self.nodes[id];
                if n.skeleton_vertices.len() >= 4 {
                    ContractionCase::SShrink
                } else {
                    let fused_p = n.virtual_edges.len() == 2
                        && n.virtual_edges.iter().all(|v| self.nodes[v.twin.0].kind == NodeKind::P);
                    ContractionCase::SMerge { fused_p }
                }
            }
        })
    }

    fn kind_counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for n in &self.nodes {
            c[n.kind as usize] += 1;
        }
        c
    }
}

fn ordered_usize(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Outcome of comparing a predicted contraction case with a from-scratch
/// decomposition of the contracted graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseCheck {
    Confirmed(ContractionCase),
    /// The contraction is not simple, or leaves the biconnected world where
    /// the case does not predict anything.
    NotApplicable(ContractionCase),
    Mismatch { case: ContractionCase, detail: String },
}

/// Checks the predicted case for edge `e` of `g` against `spqr(g/e)`.
pub fn check_contraction_case(g: &SimpleGraph, tree: &SpqrTree, e: usize) -> Result<CaseCheck, ConnectivityError> {
    let case = tree.contraction_case(e)?;
    let mismatch = |detail: String| Ok(CaseCheck::Mismatch { case, detail });
    if case == ContractionCase::PKill {
        let merged = g.contract_edge_collapsing(e);
        return if is_biconnected(&merged) {
            mismatch("contraction of a P edge stayed biconnected".into())
        } else {
            Ok(CaseCheck::Confirmed(case))
        };
    }
    let Contraction::Graph(h) = g.contract_edge(e) else {
        return Ok(CaseCheck::NotApplicable(case));
    };
    if !is_biconnected(&h) {
        return Ok(CaseCheck::NotApplicable(case));
    }
    let after = SpqrTree::build(&h)?;
    let (w0, w1) = (tree.r_edge_weight(), after.r_edge_weight());
    match case {
        ContractionCase::PKill => unreachable!(),
        ContractionCase::RLocal => {
            if w1 >= w0 {
                return mismatch(format!("R weight {w0} -> {w1} did not drop"));
            }
        }
        ContractionCase::SShrink => {
            if w1 != w0 || after.kind_counts() != tree.kind_counts() {
                return mismatch(format!(
                    "expected the same tree shape, got weight {w0} -> {w1}, kinds {:?} -> {:?}",
                    tree.kind_counts(),
                    after.kind_counts()
                ));
            }
        }
        ContractionCase::SMerge { fused_p } => {
            let expected = tree.nodes.len() - 1 - usize::from(fused_p);
            if w1 != w0 || after.nodes.len() != expected {
                return mismatch(format!(
                    "expected weight {w0} and {expected} nodes, got weight {w1} and {} nodes",
                    after.nodes.len()
                ));
            }
        }
    }
    Ok(CaseCheck::Confirmed(case))
}
