//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use gcx_core::SimpleGraph;

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    fn go(prefix: &mut Vec<u8>, used: u32, n: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n as u8 {
            if used >> v & 1 == 0 {
                prefix.push(v);
                go(prefix, used | 1 << v, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 0, n, &mut out);
    out
}

fn pair_bit(a: u8, b: u8, n: usize) -> u32 {
    let (a, b) = if a < b { (a as usize, b as usize) } else { (b as usize, a as usize) };
    // rows in order, so that larger codes favor early vertices
    (a * n + b) as u32
}

/// Adjacency code of `g` relabeled by `perm` (`v -> perm[v]`).
pub fn code(g: &SimpleGraph, perm: &[u8]) -> u128 {
    let n = g.vertex_count();
    g.edges().iter().fold(0u128, |c, &(a, b)| c | 1u128 << (127 - pair_bit(perm[a as usize], perm[b as usize], n)))
}

/// Sign of the permutation of positions that sorts `seq`.
pub fn parity<T: Ord>(seq: &[T]) -> i8 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub struct Brute {
    /// Largest adjacency code over all relabelings.
    pub canonical: u128,
    pub aut_order: u64,
    /// Some automorphism permutes the edges oddly.
    pub is_zero: bool,
}

pub fn brute(g: &SimpleGraph) -> Brute {
    let n = g.vertex_count();
    let id = code(g, &(0..n as u8).collect::<Vec<_>>());
    let mut best = 0;
    let mut aut = 0;
    let mut odd = false;
    for p in permutations(n) {
        let c = code(g, &p);
        best = best.max(c);
        if c == id {
            aut += 1;
            let mapped: Vec<(u8, u8)> = g
                .edges()
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (p[a as usize], p[b as usize]);
                    (x.min(y), x.max(y))
                })
                .collect();
            // the image sequence is a reordering of the edge set
            if parity(&mapped) * parity(g.edges()) < 0 {
                odd = true;
            }
        }
    }
    Brute { canonical: best, aut_order: aut, is_zero: odd }
}

/// Number of labeled connected graphs on `r` vertices with `k` edges and
/// minimal valence 3.
pub fn labeled_count(r: usize, k: usize) -> u64 {
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).collect();
    let m = pairs.len();
    if k > m {
        return 0;
    }
    let mut count = 0;
    let limit: u64 = 1 << m;
    let mut mask: u64 = (1u64 << k) - 1;
    while mask < limit {
        let mut deg = [0u8; 16];
        let mut adj = [0u32; 16];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                deg[a] += 1;
                deg[b] += 1;
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
        if deg[..r].iter().all(|&d| d >= 3) {
            let mut seen = 1u32;
            let mut frontier = 1u32;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = adj[v] & !seen;
                seen |= new;
                frontier |= new;
            }
            if seen == (1 << r) - 1 {
                count += 1;
            }
        }
        if k == 0 {
            break;
        }
        // next mask with the same popcount
        let c = mask & mask.wrapping_neg();
        let rr = mask + c;
        mask = (((rr ^ mask) >> 2) / c) | rr;
    }
    count
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Dense rank over the rationals by textbook elimination.
pub fn dense_rank(rows: &[Vec<i64>]) -> usize {
    use num_rational::BigRational;
    use num_traits::Zero;
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[rank][c];
            for j in c..cols {
                let t = &m[rank][j] * &f;
                m[i][j] -= t;
            }
        }
        rank += 1;
    }
    rank
}
