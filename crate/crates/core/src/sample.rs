//! Seeded random graphs for property sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connectivity::{is_biconnected, is_triconnected};
use crate::graph::SimpleGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Biconnected and ≥3-valent.
    Biconnected,
    /// Biconnected, ≥3-valent and not triconnected.
    Split,
}

pub struct GraphSampler {
    rng: ChaCha8Rng,
    max_vertices: usize,
    max_loops: i64,
    shape: Shape,
}

impl GraphSampler {
    pub fn new(seed: u64, max_vertices: usize, max_loops: i64, shape: Shape) -> Self {
        assert!(max_vertices >= 4 && max_loops >= 3, "no ≥3-valent graph fits the bounds");
        GraphSampler { rng: ChaCha8Rng::seed_from_u64(seed), max_vertices: max_vertices.min(20), max_loops, shape }
    }

    fn accept(&self, g: &SimpleGraph) -> bool {
        g.vertex_count() <= self.max_vertices
            && g.loop_order() <= self.max_loops
            && g.min_degree() >= 3
            && is_biconnected(g)
            && (self.shape == Shape::Biconnected || !is_triconnected(g))
    }

    /// Random pairs on `r` vertices with a ≥3-valent edge budget.
    fn uniform(&mut self) -> Option<Vec<(usize, usize)>> {
        let r = self.rng.gen_range(4..=self.max_vertices);
        let lo = (3 * r).div_ceil(2);
        let hi = (r * (r - 1) / 2).min((r as i64 - 1 + self.max_loops) as usize);
        if lo > hi {
            return None;
        }
        let k = self.rng.gen_range(lo..=hi);
        let mut pairs: Vec<(usize, usize)> = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).collect();
        pairs.shuffle(&mut self.rng);
        pairs.truncate(k);
        Some(pairs)
    }

    /// A cycle of terminals whose consecutive pairs are joined by edges or
    /// by small blobs of internal vertices; favors S and P nodes.
    fn necklace(&mut self) -> Option<Vec<(usize, usize)>> {
        let t = self.rng.gen_range(2..=4usize);
        let mut n = t;
        let mut pairs = Vec::new();
        let links: Vec<(usize, usize)> = if t == 2 {
            let m = self.rng.gen_range(2..=3);
            vec![(0, 1); m]
        } else {
            (0..t).map(|i| (i, (i + 1) % t)).collect()
        };
        let mut direct_used = false;
        for (a, b) in links {
            if !direct_used && self.rng.gen_bool(0.35) {
                direct_used = t == 2;
                pairs.push((a.min(b), a.max(b)));
                continue;
            }
            let size = self.rng.gen_range(2..=3);
            let inner: Vec<usize> = (n..n + size).collect();
            n += size;
            if n > self.max_vertices {
                return None;
            }
            let mut pool: Vec<usize> = inner.clone();
            pool.push(a);
            pool.push(b);
            for (i, &x) in pool.iter().enumerate() {
                for &y in &pool[i + 1..] {
                    if x < t && y < t {
                        continue;
                    }
                    if self.rng.gen_bool(0.75) {
                        pairs.push((x.min(y), x.max(y)));
                    }
                }
            }
        }
        if t > 2 && self.rng.gen_bool(0.3) {
            // a chord between two terminals
            let a = self.rng.gen_range(0..t);
            let b = (a + 2) % t;
            if a != b {
                pairs.push((a.min(b), a.max(b)));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Some(pairs)
    }

    pub fn sample(&mut self) -> SimpleGraph {
        for _ in 0..1_000_000 {
            let pairs = if self.rng.gen_bool(0.5) { self.uniform() } else { self.necklace() };
            let Some(mut pairs) = pairs else { continue };
            let n = pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut self.rng);
            for p in pairs.iter_mut() {
                *p = (perm[p.0], perm[p.1]);
            }
            pairs.shuffle(&mut self.rng);
            let Ok(g) = SimpleGraph::new(n, &pairs) else { continue };
            if self.accept(&g) {
                return g;
            }
        }
        panic!("sampler found no graph within the bounds");
    }
}

impl Iterator for GraphSampler {
    type Item = SimpleGraph;

    fn next(&mut self) -> Option<SimpleGraph> {
        Some(self.sample())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_respect_bounds_and_are_reproducible() {
        let a: Vec<SimpleGraph> = GraphSampler::new(3, 10, 6, Shape::Split).take(30).collect();
        let b: Vec<SimpleGraph> = GraphSampler::new(3, 10, 6, Shape::Split).take(30).collect();
        assert_eq!(a, b);
        for g in &a {
            assert!(g.vertex_count() <= 10 && g.loop_order() <= 6 && g.min_degree() >= 3);
            assert!(is_biconnected(g) && !is_triconnected(g));
        }
    }
}
