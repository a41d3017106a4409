mod common;

use std::collections::BTreeSet;

use common::{brute, factorial, labeled_count};
use gcx_core::generate;

/// Distinct classes whose orbit sizes `r!/|Aut|` add up to the number of
/// labeled graphs are exactly the set of all classes.
fn check(r: usize, k: usize) {
    let keys = generate(r, k);
    let mut codes = BTreeSet::new();
    let mut orbit_total = 0;
    for key in &keys {
        let g = key.graph();
        assert_eq!((g.vertex_count(), g.edge_count()), (r, k));
        assert!(g.is_connected() && g.min_degree() >= 3, "{key}");
        let b = brute(&g);
        assert!(codes.insert(b.canonical), "duplicate class {key}");
        orbit_total += factorial(r) / b.aut_order;
    }
    assert_eq!(orbit_total, labeled_count(r, k), "r={r} k={k}: {} classes", keys.len());
}

#[test]
fn generator_matches_labeled_enumeration_up_to_seven_vertices() {
    for r in 1..=7 {
        for k in 0..=r * (r - 1) / 2 {
            check(r, k);
        }
    }
}
