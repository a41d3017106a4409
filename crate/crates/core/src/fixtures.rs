//! Named example graphs.

use crate::graph::SimpleGraph;

/// Three K4 blobs attached to a 4-cycle `s1 s2 s3 s4`: vertices
/// `s1..s4 = 0..3`, `a1, a2 = 4, 5`, `b1, b2 = 6, 7`, `c1, c2 = 8, 9`.
/// The SPQR tree has R leaves for the `a`, `b` and `c` blobs, one S node
/// (the cycle, with the single real edge `s2 s3`) and one P node at
/// `{s3, s4}`.
pub fn three_leaf_graph() -> SimpleGraph {
    const EDGES: [(usize, usize); 17] = [
        (4, 5),
        (4, 0),
        (4, 3),
        (5, 0),
        (5, 3),
        (6, 7),
        (6, 0),
        (6, 1),
        (7, 0),
        (7, 1),
        (8, 9),
        (8, 2),
        (8, 3),
        (9, 2),
        (9, 3),
        (2, 3),
        (2, 1),
    ];
    SimpleGraph::new(10, &EDGES).expect("valid fixture")
}

/// Two copies of K4 minus an edge, glued along the two endpoints of the
/// missing edge (vertices 0 and 3). Its SPQR tree is two R nodes.
pub fn two_leaf_graph() -> SimpleGraph {
    SimpleGraph::new(6, &[(0, 2), (1, 3), (3, 5), (4, 0), (0, 1), (0, 5), (2, 1), (2, 3), (4, 5), (4, 3)])
        .expect("valid fixture")
}

/// Two triangles `0 1 2` and `3 4 5` joined by the verticals `0 3`,
/// `1 4`, `2 5` (edge indices 6, 7, 8).
pub fn prism() -> SimpleGraph {
    SimpleGraph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
        .expect("valid fixture")
}

/// The wheel with `rim` rim vertices; the hub is vertex 0.
pub fn wheel(rim: usize) -> SimpleGraph {
    let mut e = Vec::new();
    for i in 0..rim {
        e.push((0, 1 + i));
        e.push((1 + i, 1 + (i + 1) % rim));
    }
    SimpleGraph::new(rim + 1, &e).expect("valid fixture")
}
