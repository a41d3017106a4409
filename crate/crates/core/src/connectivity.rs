//! Cut vertices, separation pairs and the connectivity class of a graph.

use crate::error::ConnectivityError;
use crate::graph::SimpleGraph;

/// Whether `g` is connected, has at least 3 vertices and no cut vertex.
pub fn is_biconnected(g: &SimpleGraph) -> bool {
    let n = g.vertex_count();
    if n < 3 || !g.is_connected() {
        return false;
    }
    cut_vertices(g).is_empty()
}

/// Vertices whose removal disconnects a connected graph.
pub fn cut_vertices(g: &SimpleGraph) -> Vec<usize> {
    (0..g.vertex_count()).filter(|&v| disconnects(g, 1 << v)).collect()
}

/// Whether deleting the vertices of `removed` leaves a disconnected
/// (non-empty) remainder.
fn disconnects(g: &SimpleGraph, removed: u64) -> bool {
    let rest = g.all_vertices() & !removed;
    if rest == 0 {
        return false;
    }
    let start = rest.trailing_zeros() as usize;
    g.reach(start, removed) != rest
}

pub fn is_separation_pair(g: &SimpleGraph, u: usize, v: usize) -> bool {
    u != v && disconnects(g, 1 << u | 1 << v)
}

/// All vertex pairs `u < v` whose deletion disconnects the graph.
pub fn separation_pairs(g: &SimpleGraph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if disconnects(g, 1 << u | 1 << v) {
                out.push((u, v));
            }
        }
    }
    out
}

pub fn is_triconnected(g: &SimpleGraph) -> bool {
    is_biconnected(g) && separation_pairs(g).is_empty()
}

/// 3 if biconnected without separation pair, 2 if biconnected, else 1.
pub fn connectivity_class(g: &SimpleGraph) -> Result<u8, ConnectivityError> {
    if !g.is_connected() {
        return Err(ConnectivityError::Disconnected);
    }
    if g.vertex_count() < 3 {
        return Err(ConnectivityError::TooSmall(g.vertex_count()));
    }
    if !cut_vertices(g).is_empty() {
        return Ok(1);
    }
    Ok(if separation_pairs(g).is_empty() { 3 } else { 2 })
}
