use gcx_core::graph6::{decode, encode};
use gcx_core::SimpleGraph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> SimpleGraph {
    let p = rng.gen_range(0.0..1.0);
    let e: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(p)).collect();
    SimpleGraph::new(n, &e).unwrap()
}

#[test]
fn thousand_graphs_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..1000 {
        let g = random_graph(&mut rng, i % 63);
        let (sorted, _) = g.sorted_edges();
        let back = decode(&encode(&g)).unwrap();
        assert_eq!(back, sorted);
        assert_eq!(encode(&back), encode(&g));
    }
}

proptest! {
    #[test]
    fn decoded_strings_re_encode(seed in any::<u64>(), n in 0usize..63) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n);
        let s = encode(&g);
        prop_assert!(s.bytes().all(|b| (63..=126).contains(&b)));
        prop_assert_eq!(encode(&decode(&s).unwrap()), s);
    }
}
