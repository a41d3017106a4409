//! Exact sparse matrices over the rationals and their rank.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl SparseRationalMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::new(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.add(i, j, BigRational::from_integer(v.into()));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> BigRational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Adds `v` to entry `(r, c)`, removing the entry if it cancels.
    pub fn add(&mut self, r: usize, c: usize, v: BigRational) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry((r, c)).or_insert_with(BigRational::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::new(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            t.entries.insert((c, r), v.clone());
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut by_row: Vec<Vec<(usize, &BigRational)>> = vec![Vec::new(); other.rows];
        for (&(r, c), v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut out = Self::new(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                out.add(i, j, a * b);
            }
        }
        out
    }

    /// Rows with denominators cleared, as sparse integer vectors.
    fn integer_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        let mut rows: Vec<Vec<(usize, &BigRational)>> = vec![Vec::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].push((c, v));
        }
        rows.into_iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let lcm = r.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
                r.into_iter().map(|(c, v)| (c, v.numer() * (&lcm / v.denom()))).collect()
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMethod {
    /// Fraction-free integer elimination.
    Exact,
    /// Rank modulo two large primes, cross-checked by an exact rank of the
    /// pivot minor; falls back to exact elimination on disagreement.
    Modular,
    /// Exact below a size threshold, modular above.
    #[default]
    Auto,
}

/// Primes above 2^30 used by the modular path.
pub const RANK_PRIMES: [u64; 2] = [2_147_483_647, 1_073_741_827];

const AUTO_EXACT_NNZ: usize = 20_000;

pub fn exact_rank(m: &SparseRationalMatrix) -> usize {
    rank_with(m, RankMethod::Auto)
}

pub fn rank_with(m: &SparseRationalMatrix, method: RankMethod) -> usize {
    match method {
        RankMethod::Exact => integer_rank(m.integer_rows()),
        RankMethod::Modular => modular_rank(m),
        RankMethod::Auto if m.nnz() <= AUTO_EXACT_NNZ => integer_rank(m.integer_rows()),
        RankMethod::Auto => modular_rank(m),
    }
}

/// Markowitz pivot choice: minimal `(row_len - 1)(col_count - 1)`, then the
/// smallest pivot size, then the earliest position.
fn choose_pivot<T>(rows: &[Vec<(usize, T)>], ncols: usize, size: impl Fn(&T) -> u64) -> (usize, usize) {
    let mut count = vec![0usize; ncols];
    for row in rows {
        for (c, _) in row {
            count[*c] += 1;
        }
    }
    let mut best: Option<((usize, u64), (usize, usize))> = None;
    for (i, row) in rows.iter().enumerate() {
        for (pos, (c, v)) in row.iter().enumerate() {
            let cost = ((row.len() - 1) * (count[*c] - 1), size(v));
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, (i, pos)));
            }
        }
    }
    best.expect("nonempty rows").1
}

/// Fraction-free elimination.
fn integer_rank(rows: Vec<Vec<(usize, BigInt)>>) -> usize {
    let ncols = rows.iter().flat_map(|r| r.iter().map(|(c, _)| c + 1)).max().unwrap_or(0);
    let mut rows: Vec<Vec<(usize, BigInt)>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut rank = 0;
    while !rows.is_empty() {
        let (pi, ppos) = choose_pivot(&rows, ncols, |v: &BigInt| v.abs().to_u64().unwrap_or(u64::MAX));
        let prow = rows.swap_remove(pi);
        let (pc, pv) = prow[ppos].clone();
        rank += 1;
        let mut next = Vec::with_capacity(rows.len());
        for row in rows {
            let Ok(at) = row.binary_search_by_key(&pc, |(c, _)| *c) else {
                next.push(row);
                continue;
            };
            let a = row[at].1.clone();
            let combined = combine(&row, &pv, &prow, &a);
            if !combined.is_empty() {
                next.push(combined);
            }
        }
        rows = next;
    }
    rank
}

/// `p · row − a · prow`, divided by the gcd of its entries.
fn combine(row: &[(usize, BigInt)], p: &BigInt, prow: &[(usize, BigInt)], a: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(row.len() + prow.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < prow.len() {
        let ci = row.get(i).map_or(usize::MAX, |x| x.0);
        let cj = prow.get(j).map_or(usize::MAX, |x| x.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, p * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(a * &prow[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, p * &row[i - 1].1 - a * &prow[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    let g = out.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in &mut out {
            *v /= &g;
        }
    }
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn reduce_mod(v: &BigRational, p: u64) -> Option<u64> {
    let pm = BigInt::from(p);
    let num = v.numer().mod_floor(&pm).to_u64().unwrap();
    let den = v.denom().mod_floor(&pm).to_u64().unwrap();
    if den == 0 {
        return None;
    }
    Some((num as u128 * inv_mod(den, p) as u128 % p as u128) as u64)
}

/// Rank over `F_p` with the pivot rows and columns, or `None` if some
/// denominator vanishes mod `p`.
fn rank_mod_p(m: &SparseRationalMatrix, p: u64) -> Option<(usize, Vec<usize>, Vec<usize>)> {
    let mut rows: Vec<(usize, Vec<(usize, u64)>)> = Vec::new();
    let mut current: Option<(usize, Vec<(usize, u64)>)> = None;
    for (&(r, c), v) in &m.entries {
        let x = reduce_mod(v, p)?;
        if current.as_ref().is_none_or(|(cr, _)| *cr != r) {
            if let Some(done) = current.take() {
                rows.push(done);
            }
            current = Some((r, Vec::new()));
        }
        if x != 0 {
            current.as_mut().unwrap().1.push((c, x));
        }
    }
    rows.extend(current);
    rows.retain(|(_, r)| !r.is_empty());
    let (mut pivot_rows, mut pivot_cols) = (Vec::new(), Vec::new());
    while !rows.is_empty() {
        let plain: Vec<Vec<(usize, u64)>> = rows.iter().map(|(_, r)| r.clone()).collect();
        let (pi, ppos) = choose_pivot(&plain, m.cols, |v: &u64| if *v == 1 || *v == p - 1 { 0 } else { 1 });
        let (orig, prow) = rows.swap_remove(pi);
        let (pc, pv) = prow[ppos];
        pivot_rows.push(orig);
        pivot_cols.push(pc);
        let pinv = inv_mod(pv, p);
        let mut next = Vec::with_capacity(rows.len());
        for (o, row) in rows {
            let Ok(at) = row.binary_search_by_key(&pc, |(c, _)| *c) else {
                next.push((o, row));
                continue;
            };
            // row -= f · prow with f = row[pc] / pv
            let f = (row[at].1 as u128 * pinv as u128 % p as u128) as u64;
            let mut out = Vec::with_capacity(row.len() + prow.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < prow.len() {
                let ci = row.get(i).map_or(usize::MAX, |x| x.0);
                let cj = prow.get(j).map_or(usize::MAX, |x| x.0);
                let sub = |x: u64| ((p - (f as u128 * x as u128 % p as u128) as u64) % p) as u128;
                let (c, v) = if ci < cj {
                    i += 1;
                    (ci, row[i - 1].1)
                } else if cj < ci {
                    j += 1;
                    (cj, sub(prow[j - 1].1) as u64)
                } else {
                    i += 1;
                    j += 1;
                    (ci, ((row[i - 1].1 as u128 + sub(prow[j - 1].1)) % p as u128) as u64)
                };
                if v != 0 {
                    out.push((c, v));
                }
            }
            if !out.is_empty() {
                next.push((o, out));
            }
        }
        rows = next;
    }
    Some((pivot_rows.len(), pivot_rows, pivot_cols))
}

fn modular_rank(m: &SparseRationalMatrix) -> usize {
    let first = rank_mod_p(m, RANK_PRIMES[0]);
    let second = rank_mod_p(m, RANK_PRIMES[1]);
    let (Some((r1, prows, pcols)), Some((r2, _, _))) = (first, second) else {
        return integer_rank(m.integer_rows());
    };
    if r1 != r2 {
        return integer_rank(m.integer_rows());
    }
    // spot check: the pivot minor must be nonsingular over Q
    let row_pos: BTreeMap<usize, usize> = prows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let col_pos: BTreeMap<usize, usize> = pcols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut minor = SparseRationalMatrix::new(r1, r1);
    for (&(r, c), v) in &m.entries {
        if let (Some(&i), Some(&j)) = (row_pos.get(&r), col_pos.get(&c)) {
            minor.add(i, j, v.clone());
        }
    }
    if integer_rank(minor.integer_rows()) == r1 {
        r1
    } else {
        integer_rank(m.integer_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_permutation() {
        assert_eq!(exact_rank(&SparseRationalMatrix::new(4, 5)), 0);
        let mut p = SparseRationalMatrix::new(5, 5);
        for (i, j) in [(0, 3), (1, 0), (2, 4), (3, 1), (4, 2)] {
            p.add(i, j, BigRational::one());
        }
        for m in [RankMethod::Exact, RankMethod::Modular] {
            assert_eq!(rank_with(&p, m), 5);
        }
    }

    #[test]
    fn dependent_rows() {
        let m = SparseRationalMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank_with(&m, RankMethod::Exact), 2);
        assert_eq!(rank_with(&m, RankMethod::Modular), 2);
    }

    #[test]
    fn rank_sees_through_a_prime() {
        // singular mod 2147483647 only
        let p = RANK_PRIMES[0] as i64;
        let m = SparseRationalMatrix::from_dense(&[vec![p, 0], vec![0, 1]]);
        assert_eq!(rank_with(&m, RankMethod::Modular), 2);
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseRationalMatrix::from_dense(&[vec![1, -1], vec![0, 2]]);
        let b = a.mul(&a.transpose());
        assert_eq!(b, SparseRationalMatrix::from_dense(&[vec![2, -2], vec![-2, 4]]));
    }
}
