use gcx_core::connectivity::{connectivity_class, is_triconnected};
use gcx_core::dual::{
    addition_terms, apply_d, apply_nabla, apply_pi, contraction_terms, removal_connectivity_drop, removal_terms,
    sample_classes, splitting_terms,
};
use gcx_core::sample::{GraphSampler, Shape};
use gcx_core::{canonical_form, CanonKey, GraphSum, SimpleGraph};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sum_of(g: &SimpleGraph) -> GraphSum {
    let c = canonical_form(g);
    let mut s = GraphSum::new();
    let coeff = c.signed() as i64;
    s.add_int(c.key, coeff);
    s
}

fn random_sum(rng: &mut ChaCha8Rng, pool: &[CanonKey], with_unions: bool) -> GraphSum {
    let mut s = GraphSum::new();
    for _ in 0..rng.gen_range(1..=4) {
        let a = pool.choose(rng).unwrap().graph();
        let g = if with_unions && rng.gen_bool(0.5) { a.disjoint_union(&pool.choose(rng).unwrap().graph()) } else { a };
        s.add_scaled(&sum_of(&g), &num_rational::BigRational::from_integer(rng.gen_range(-3..=3).into()));
    }
    s
}

fn pool() -> Vec<CanonKey> {
    sample_classes(3, 6)
}

#[test]
fn nabla_squares_to_zero() {
    let pool = pool();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let x = random_sum(&mut rng, &pool, false);
        assert!(apply_nabla(&apply_nabla(&x)).is_zero());
    }
}

#[test]
fn projection_is_idempotent() {
    let pool: Vec<CanonKey> = sample_classes(3, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut saw_disconnected = false;
    for _ in 0..100 {
        let x = random_sum(&mut rng, &pool, true);
        let p = apply_pi(&x);
        saw_disconnected |= p != x;
        assert_eq!(apply_pi(&p), p);
    }
    assert!(saw_disconnected);
}

#[test]
fn operators_shift_the_grading() {
    for key in sample_classes(3, 5) {
        let g = key.graph();
        let (r, k) = (g.vertex_count(), g.edge_count());
        let shape = |terms: Vec<(SimpleGraph, i64)>| -> Vec<(usize, usize)> {
            terms.iter().map(|(h, _)| (h.vertex_count(), h.edge_count())).collect()
        };
        assert!(shape(contraction_terms(&g)).iter().all(|&s| s == (r - 1, k - 1)));
        assert!(shape(splitting_terms(&g)).iter().all(|&s| s == (r + 1, k + 1)));
        assert!(shape(addition_terms(&g)).iter().all(|&s| s == (r, k + 1)));
        assert!(shape(removal_terms(&g)).iter().all(|&s| s == (r - 1, k)));
    }
}

#[test]
fn removal_costs_at_most_one_level_of_connectivity() {
    let mut tri = 0;
    for g in GraphSampler::new(21, 10, 6, Shape::Biconnected).take(150) {
        assert_eq!(connectivity_class(&g).map(|c| c >= 2), Ok(true));
        tri += is_triconnected(&g) as usize;
        assert!(removal_connectivity_drop(&g), "{}", gcx_core::graph6::encode(&g));
        assert!(removal_terms(&g).iter().all(|(h, _)| h.is_connected()));
    }
    assert!(tri > 0, "no triconnected sample");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contraction_squares_to_zero(seed in any::<u64>()) {
        let g = GraphSampler::new(seed, 10, 6, Shape::Biconnected).sample();
        prop_assert!(apply_d(&apply_d(&sum_of(&g))).is_zero());
    }
}
