use gcx_core::homotopy::homotopy_check_all;
use gcx_core::sample::{GraphSampler, Shape};
use gcx_core::spqr::NodeKind;
use gcx_core::{homotopy_check, n_value, to_labeled};

#[test]
fn homotopy_identity_on_random_split_graphs() {
    let mut checks = 0;
    for g in GraphSampler::new(77, 10, 6, Shape::Split).take(120) {
        for r in homotopy_check_all(&g).unwrap() {
            checks += 1;
            assert!(r.pass && r.split_pass, "{r:?}");
        }
    }
    assert!(checks >= 240);
}

#[test]
fn n_counts_tree_edges_at_an_s_neighbor() {
    for g in GraphSampler::new(78, 10, 6, Shape::Split).take(60) {
        let x = to_labeled(&g).unwrap();
        let first = x.leaves()[0];
        let tree = x.tree();
        let (a, b) = *tree.tree_edges.iter().find(|&&(a, b)| a == first || b == first).unwrap();
        let w = if a == first { b } else { a };
        let expected = match tree.node(w).kind {
            NodeKind::S => tree.tree_edges.iter().filter(|&&(a, b)| a == w || b == w).count(),
            _ => 2,
        };
        assert_eq!(n_value(&x), expected);
        assert_eq!(homotopy_check(&x).unwrap().n, expected);
    }
}
