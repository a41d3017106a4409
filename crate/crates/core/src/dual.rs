//! Operators on formal sums of (possibly disconnected) simple ≥3-valent
//! graphs: contraction `d`, vertex splitting `δ₀`, edge addition `∇`, the
//! vertex-removal operator `D`, the projection `π` onto connected graphs,
//! `D̄ = πD` and the higher differentials `δ_k`.
//!
//! Every term is an oriented graph whose orientation is its edge order; it
//! is reduced to `sign · (canonical graph, lexicographic order)` on
//! insertion, and orientation-zero classes are dropped. Operators act on a
//! key through its canonical representative with lexicographic edge order.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonKey};
use crate::connectivity::{connectivity_class, is_biconnected};
use crate::enumerate::{build_basis, Variant};
use crate::formal::FormalSum;
use crate::graph::{Contraction, Edge, SimpleGraph};

pub type GraphSum = FormalSum<CanonKey>;

fn ordered(a: u8, b: u8) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Adds `coeff · h` (oriented by its edge order) to `out`.
fn push(out: &mut GraphSum, h: &SimpleGraph, coeff: &BigRational) {
    let c = canonical_form(h);
    if c.is_zero {
        return;
    }
    let signed = if c.sign > 0 { coeff.clone() } else { -coeff.clone() };
    out.add_term(c.key, signed);
}

fn collect_terms(terms: &[(SimpleGraph, i64)]) -> GraphSum {
    let mut out = GraphSum::new();
    for (h, c) in terms {
        push(&mut out, h, &BigRational::from_integer((*c).into()));
    }
    out
}

/// Extends a per-graph operator linearly; terms are processed in parallel
/// and summed in key order.
fn linear(x: &GraphSum, f: impl Fn(&SimpleGraph) -> Vec<(SimpleGraph, i64)> + Sync) -> GraphSum {
    let parts: Vec<(GraphSum, BigRational)> =
        x.iter().collect::<Vec<_>>().par_iter().map(|(k, c)| (collect_terms(&f(&k.graph())), (*c).clone())).collect();
    let mut out = GraphSum::new();
    for (s, c) in parts {
        out.add_scaled(&s, &c);
    }
    out
}

/// `d(γ) = Σ_j (−1)^j γ/e_j`, non-simple contractions omitted.
pub fn contraction_terms(g: &SimpleGraph) -> Vec<(SimpleGraph, i64)> {
    (0..g.edge_count())
        .filter_map(|j| match g.contract_edge(j) {
            Contraction::Graph(h) => Some((h, if j % 2 == 0 { 1 } else { -1 })),
            Contraction::NonSimple => None,
        })
        .collect()
}

/// Vertex splittings: every vertex `v` and every unordered partition of its
/// edges into two blocks of size ≥ 2. The second block moves to a new
/// vertex `n`, joined to `v` by a new edge placed first.
pub fn splitting_terms(g: &SimpleGraph) -> Vec<(SimpleGraph, i64)> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for v in 0..n {
        let inc = g.incident_edges(v);
        let m = inc.len();
        if m < 4 {
            continue;
        }
        // the first incident edge always stays at v
        for mask in 0u64..(1 << (m - 1)) {
            let moved = (mask << 1).count_ones() as usize;
            if moved < 2 || m - moved < 2 {
                continue;
            }
            let mut edges = Vec::with_capacity(g.edge_count() + 1);
            edges.push((v as u8, n as u8));
            for (i, &(a, b)) in g.edges().iter().enumerate() {
                let slot = inc.iter().position(|&e| e == i);
                match slot {
                    Some(s) if (mask << 1) >> s & 1 == 1 => {
                        let other = if a as usize == v { b } else { a };
                        edges.push(ordered(other, n as u8));
                    }
                    _ => edges.push((a, b)),
                }
            }
            out.push((SimpleGraph::from_normalized(n + 1, edges), 1));
        }
    }
    out
}

/// Edge additions: every non-adjacent pair, new edge first.
pub fn addition_terms(g: &SimpleGraph) -> Vec<(SimpleGraph, i64)> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                let mut edges = vec![(u as u8, v as u8)];
                edges.extend_from_slice(g.edges());
                out.push((SimpleGraph::from_normalized(n, edges), 1));
            }
        }
    }
    out
}

/// Vertex removals: delete `v` and reattach the loose end of each edge
/// `v–a` to a surviving vertex `w ≠ a` not yet adjacent to `a` (earlier
/// reattachments included). Edges keep their positions; labels above `v`
/// shift down; the term carries the sign `(−1)^(val v + 1)`. Results may be
/// disconnected.
pub fn removal_terms(g: &SimpleGraph) -> Vec<(SimpleGraph, i64)> {
    (0..g.vertex_count()).flat_map(|v| removal_terms_at(g, v)).collect()
}

/// The terms of [`removal_terms`] that delete vertex `v`.
pub fn removal_terms_at(g: &SimpleGraph, v: usize) -> Vec<(SimpleGraph, i64)> {
    let mut out = Vec::new();
    let inc = g.incident_edges(v);
    let fixed: Vec<u8> = inc
        .iter()
        .map(|&i| {
            let (a, b) = g.edge(i);
            if a as usize == v {
                b
            } else {
                a
            }
        })
        .collect();
    let mut adj: Vec<u64> = g.adjacency().iter().map(|row| row & !(1u64 << v)).collect();
    adj[v] = 0;
    let survivors = g.all_vertices() & !(1u64 << v);
    let mut targets = vec![0u8; inc.len()];
    let sign = if inc.len() % 2 == 1 { 1 } else { -1 };
    reattach(g, v, &inc, &fixed, 0, survivors, &mut adj, &mut targets, sign, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn reattach(
    g: &SimpleGraph,
    v: usize,
    inc: &[usize],
    fixed: &[u8],
    depth: usize,
    survivors: u64,
    adj: &mut [u64],
    targets: &mut [u8],
    sign: i64,
    out: &mut Vec<(SimpleGraph, i64)>,
) {
    if depth == inc.len() {
        let shift = |w: u8| if w as usize > v { w - 1 } else { w };
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| match inc.iter().position(|&e| e == i) {
                Some(s) => ordered(shift(fixed[s]), shift(targets[s])),
                None => ordered(shift(a), shift(b)),
            })
            .collect();
        out.push((SimpleGraph::from_normalized(g.vertex_count() - 1, edges), sign));
        return;
    }
    let a = fixed[depth] as usize;
    let mut free = survivors & !(1u64 << a) & !adj[a];
    while free != 0 {
        let w = free.trailing_zeros() as usize;
        free &= free - 1;
        adj[a] |= 1 << w;
        adj[w] |= 1 << a;
        targets[depth] = w as u8;
        reattach(g, v, inc, fixed, depth + 1, survivors, adj, targets, sign, out);
        adj[a] &= !(1u64 << w);
        adj[w] &= !(1u64 << a);
    }
}

pub fn apply_d(x: &GraphSum) -> GraphSum {
    linear(x, contraction_terms)
}

pub fn apply_delta0(x: &GraphSum) -> GraphSum {
    linear(x, splitting_terms)
}

pub fn apply_nabla(x: &GraphSum) -> GraphSum {
    linear(x, addition_terms)
}

/// The vertex-removal operator `D = ½ Σ_v (−1)^(val v + 1) D_v` on the
/// disconnected complex.
pub fn apply_removal(x: &GraphSum) -> GraphSum {
    linear(x, removal_terms).scaled(&BigRational::new(1.into(), 2.into()))
}

/// The literal reading of `D`: every vertex removal with coefficient 1.
/// It does not satisfy the homotopy relation; kept for
/// [`Identity::CandidateRemovalHomotopy`].
pub fn apply_removal_unweighted(x: &GraphSum) -> GraphSum {
    linear(x, |g| removal_terms(g).into_iter().map(|(h, _)| (h, 1)).collect())
}

/// Drops the disconnected terms.
pub fn apply_pi(x: &GraphSum) -> GraphSum {
    x.filtered(|k| k.graph().is_connected())
}

/// `D̄ = πD`.
pub fn apply_dbar(x: &GraphSum) -> GraphSum {
    apply_pi(&apply_removal(x))
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `δ_k = (k−1)/k! · ad_{D̄}^{k−1} ∇` with `ad(X) = D̄X − XD̄`, expanded as
/// `Σ_i (−1)^i C(k−1, i) D̄^{k−1−i} ∇ D̄^i`.
pub fn apply_delta_k(k: u32, x: &GraphSum) -> GraphSum {
    assert!(k >= 2, "δ_k is defined for k ≥ 2");
    let m = (k - 1) as u64;
    let mut powers = vec![x.clone()];
    for _ in 0..m {
        let next = apply_dbar(powers.last().unwrap());
        powers.push(next);
    }
    let mut total = GraphSum::new();
    for i in 0..=m {
        let mut term = apply_nabla(&powers[i as usize]);
        for _ in 0..m - i {
            term = apply_dbar(&term);
        }
        let mut c = BigRational::from_integer(binomial(m, i).into());
        if i % 2 == 1 {
            c = -c;
        }
        total.add_scaled(&term, &c);
    }
    let scale = BigRational::new((k as i64 - 1).into(), factorial(k as u64).into());
    total.scaled(&scale)
}

/// Named identities checked pointwise by [`identity_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `d² = 0`.
    DSquared,
    /// `δ₀² = 0`, `∇² = 0` and `δ₀∇ + ∇δ₀ = 0`, i.e. `(δ₀ + ∇)² = 0`.
    DeformedSquare,
    /// `δ₀D − Dδ₀ = ∇`.
    RemovalHomotopy,
    /// `D² = 0`.
    RemovalSquared,
    /// `∇D + D∇ = 0`.
    RemovalAnticommutes,
    /// `δ₀D̄ − D̄δ₀ = ∇` on connected graphs.
    ProjectedHomotopy,
    /// `D̄² γ = 0` for biconnected `γ`.
    ProjectedSquared,
    /// `(∇D̄ + D̄∇) γ = 0` for biconnected `γ`.
    ProjectedAnticommutes,
    /// `δ₂ γ = D̄∇γ` for biconnected `γ`.
    DeltaTwo,
    /// `δ₃ γ = 0` for biconnected `γ`.
    DeltaThree,
    /// `δ₄ γ = 0` for biconnected `γ`.
    DeltaFour,
    /// `δ₀D₁ + D₁δ₀ = ∇` for the unweighted removal `D₁`; fails.
    CandidateRemovalHomotopy,
}

impl Identity {
    pub const ALL: [Identity; 11] = [
        Identity::DSquared,
        Identity::DeformedSquare,
        Identity::RemovalHomotopy,
        Identity::RemovalSquared,
        Identity::RemovalAnticommutes,
        Identity::ProjectedHomotopy,
        Identity::ProjectedSquared,
        Identity::ProjectedAnticommutes,
        Identity::DeltaTwo,
        Identity::DeltaThree,
        Identity::DeltaFour,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::DSquared => "d^2=0",
            Identity::DeformedSquare => "(delta0+nabla)^2=0",
            Identity::RemovalHomotopy => "delta0 D - D delta0 = nabla",
            Identity::RemovalSquared => "D^2=0",
            Identity::RemovalAnticommutes => "nabla D + D nabla = 0",
            Identity::ProjectedHomotopy => "delta0 Dbar - Dbar delta0 = nabla",
            Identity::ProjectedSquared => "Dbar^2=0 (biconnected)",
            Identity::ProjectedAnticommutes => "nabla Dbar + Dbar nabla = 0 (biconnected)",
            Identity::DeltaTwo => "delta2 = Dbar nabla (biconnected)",
            Identity::DeltaThree => "delta3=0 (biconnected)",
            Identity::DeltaFour => "delta4=0 (biconnected)",
            Identity::CandidateRemovalHomotopy => "delta0 D1 + D1 delta0 = nabla (unweighted D1)",
        }
    }

    fn biconnected_only(self) -> bool {
        matches!(
            self,
            Identity::ProjectedSquared
                | Identity::ProjectedAnticommutes
                | Identity::DeltaTwo
                | Identity::DeltaThree
                | Identity::DeltaFour
        )
    }

    /// `lhs − rhs` evaluated on `x`.
    pub fn residual(self, x: &GraphSum) -> GraphSum {
        let sum = |a: GraphSum, b: GraphSum| &a + &b;
        match self {
            Identity::DSquared => apply_d(&apply_d(x)),
            Identity::DeformedSquare => {
                let y = &apply_delta0(x) + &apply_nabla(x);
                &apply_delta0(&y) + &apply_nabla(&y)
            }
            Identity::RemovalHomotopy => {
                let lhs = &apply_delta0(&apply_removal(x)) - &apply_removal(&apply_delta0(x));
                &lhs - &apply_nabla(x)
            }
            Identity::RemovalSquared => apply_removal(&apply_removal(x)),
            Identity::RemovalAnticommutes => sum(apply_nabla(&apply_removal(x)), apply_removal(&apply_nabla(x))),
            Identity::ProjectedHomotopy => {
                let lhs = &apply_delta0(&apply_dbar(x)) - &apply_dbar(&apply_delta0(x));
                &lhs - &apply_nabla(x)
            }
            Identity::ProjectedSquared => apply_dbar(&apply_dbar(x)),
            Identity::ProjectedAnticommutes => sum(apply_nabla(&apply_dbar(x)), apply_dbar(&apply_nabla(x))),
            Identity::DeltaTwo => &apply_delta_k(2, x) - &apply_dbar(&apply_nabla(x)),
            Identity::DeltaThree => apply_delta_k(3, x),
            Identity::DeltaFour => apply_delta_k(4, x),
            Identity::CandidateRemovalHomotopy => {
                let lhs = &apply_delta0(&apply_removal_unweighted(x)) + &apply_removal_unweighted(&apply_delta0(x));
                &lhs - &apply_nabla(x)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub name: String,
    pub loop_orders: (i64, i64),
    pub checked: usize,
    pub failed: usize,
    /// graph6 of the first failing input and the size of its residual.
    pub first_failure: Option<(String, usize)>,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.failed == 0
    }
}

/// Nonzero basis classes of the full complex with loop order in
/// `min_g..=max_g`, in (g, r, key) order.
pub fn sample_classes(min_g: i64, max_g: i64) -> Vec<CanonKey> {
    let mut out = Vec::new();
    for g in min_g..=max_g {
        for r in 1..=crate::complex::max_vertices(g) {
            out.extend(build_basis(g, r, Variant::Full).keys);
        }
    }
    out
}

/// Evaluates `identity` on every class in `inputs` (biconnected ones only
/// where the identity requires it).
pub fn identity_suite(identity: Identity, inputs: &[CanonKey], loop_orders: (i64, i64)) -> IdentityReport {
    let eligible: Vec<&CanonKey> = inputs
        .iter()
        .filter(|k| !identity.biconnected_only() || is_biconnected(&k.graph()))
        .collect();
    let results: Vec<usize> =
        eligible.par_iter().map(|k| identity.residual(&GraphSum::single((*k).clone())).len()).collect();
    let first_failure =
        eligible.iter().zip(&results).find(|(_, &n)| n > 0).map(|(k, &n)| (k.as_str().to_string(), n));
    IdentityReport {
        identity,
        name: identity.name().to_string(),
        loop_orders,
        checked: eligible.len(),
        failed: results.iter().filter(|&&n| n > 0).count(),
        first_failure,
    }
}

/// Checks `coeff_{γ'}(δ₀γ)·|Aut γ'| = coeff_γ(dγ')·|Aut γ|` for every pair
/// of basis classes `γ ∈ V_r`, `γ' ∈ V_{r+1}` at loop order `g`. Returns the
/// number of pairs compared and the first mismatch.
pub fn adjointness(g: i64) -> (usize, Option<(String, String)>) {
    let mut pairs = 0;
    for r in 1..crate::complex::max_vertices(g) {
        let low = build_basis(g, r, Variant::Full);
        let high = build_basis(g, r + 1, Variant::Full);
        let aut = |k: &CanonKey| BigRational::from_integer(canonical_form(&k.graph()).aut_order().clone().into());
        for a in &low.keys {
            let up = apply_delta0(&GraphSum::single(a.clone()));
            for b in &high.keys {
                pairs += 1;
                let down = apply_d(&GraphSum::single(b.clone()));
                let lhs = up.coeff(b) * aut(b);
                let rhs = down.coeff(a) * aut(a);
                if lhs != rhs {
                    return (pairs, Some((a.to_string(), b.to_string())));
                }
            }
        }
    }
    (pairs, None)
}

/// A disconnected input on which `∇π ≠ π∇`: two disjoint copies of K4.
pub fn projection_witness() -> (GraphSum, GraphSum, GraphSum) {
    let k4 = SimpleGraph::complete(4);
    let x = collect_terms(&[(k4.disjoint_union(&k4), 1)]);
    let nabla_pi = apply_nabla(&apply_pi(&x));
    let pi_nabla = apply_pi(&apply_nabla(&x));
    (x, nabla_pi, pi_nabla)
}

/// Whether every term of `D(γ)` is at least `(k−1)`-connected when `γ` is
/// `k`-connected (connected terms only are classified).
pub fn removal_connectivity_drop(g: &SimpleGraph) -> bool {
    let Ok(k) = connectivity_class(g) else { return true };
    removal_terms(g).iter().all(|(h, _)| {
        if k >= 2 && !h.is_connected() {
            return false;
        }
        match connectivity_class(h) {
            Ok(c) => c + 1 >= k,
            Err(_) => k <= 1,
        }
    })
}
