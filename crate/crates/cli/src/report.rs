use std::fmt::Write;

use gcx_core::spqr::SkeletonEdge;
use gcx_core::SpqrTree;
use serde_json::Value;

/// A rendered result in both output formats.
pub struct Report {
    pub tsv: String,
    pub json: Value,
    pub pass: bool,
}

impl Report {
    pub fn ok(tsv: String, json: Value) -> Report {
        Report { tsv, json, pass: true }
    }
}

/// One line per node: id, kind, skeleton vertices, skeleton edges
/// (`e<index>` real, `v<id>` virtual), tree neighbors.
pub fn spqr_tsv(tree: &SpqrTree) -> String {
    let mut s = String::from("node\tkind\tvertices\tedges\tneighbors\n");
    for n in &tree.nodes {
        let verts: Vec<String> = n.skeleton_vertices.iter().map(|v| v.to_string()).collect();
        let edges: Vec<String> = tree
            .skeleton_edges(n.id)
            .iter()
            .map(|(tag, (a, b))| match tag {
                SkeletonEdge::Real(i) => format!("e{i}:{a}-{b}"),
                SkeletonEdge::Virtual(i) => format!("v{i}:{a}-{b}"),
            })
            .collect();
        let nbrs: Vec<String> = tree.neighbors(n.id).iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}\t{:?}\t{}\t{}\t{}", n.id, n.kind, verts.join(","), edges.join(" "), nbrs.join(","));
    }
    s
}
