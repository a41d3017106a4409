mod common;

use common::dense_rank;
use gcx_core::linalg::rank_with;
use gcx_core::{exact_rank, RankMethod, SparseRationalMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rows(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let (r, c) = (rng.gen_range(1..=30), rng.gen_range(1..=30));
    let density = rng.gen_range(0.05..0.6);
    let mut rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..c).map(|_| if rng.gen_bool(density) { rng.gen_range(-3..=3) } else { 0 }).collect())
        .collect();
    // plant dependencies
    for _ in 0..rng.gen_range(0..=r / 2) {
        let (a, b, t) = (rng.gen_range(0..r), rng.gen_range(0..r), rng.gen_range(0..r));
        let (x, y) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        rows[t] = (0..c).map(|j| x * rows[a][j] + y * rows[b][j]).collect();
    }
    rows
}

#[test]
fn rank_matches_dense_elimination() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let rows = random_rows(&mut rng);
        let m = SparseRationalMatrix::from_dense(&rows);
        let want = dense_rank(&rows);
        assert_eq!(exact_rank(&m), want);
        assert_eq!(rank_with(&m, RankMethod::Exact), want);
        assert_eq!(rank_with(&m, RankMethod::Modular), want);
        assert_eq!(exact_rank(&m.transpose()), want);
    }
}

proptest! {
    #[test]
    fn rank_of_a_product_is_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = SparseRationalMatrix::from_dense(&random_rows(&mut rng));
        let cols = a.cols();
        let b_rows: Vec<Vec<i64>> = (0..cols).map(|_| (0..rng.gen_range(1..=20)).map(|_| 0).collect()).collect();
        let width = b_rows[0].len();
        let b_rows: Vec<Vec<i64>> = b_rows.iter().map(|_| (0..width).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let b = SparseRationalMatrix::from_dense(&b_rows);
        let ab = a.mul(&b);
        prop_assert!(exact_rank(&ab) <= exact_rank(&a).min(exact_rank(&b)));
    }
}
