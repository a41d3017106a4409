//! End-to-end acceptance checks, one PASS/FAIL line each.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use gcx_core::complex::{differential_matrix, table1};
use gcx_core::dual::{adjointness, sample_classes};
use gcx_core::enumerate::build_all_bases;
use gcx_core::fixtures::three_leaf_graph;
use gcx_core::homotopy::homotopy_check_all;
use gcx_core::sample::{GraphSampler, Shape};
use gcx_core::spqr::{check_contraction_case, CaseCheck, NodeKind};
use gcx_core::{
    canonical_form, cohomology_dims, generate, identity_suite, n_value, to_labeled, verify_quasi_isomorphism,
    ContractionCase, Identity, LabeledGraph, RankMethod, SpqrTree, Variant,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ten_loop_dimensions() -> Outcome {
    let rows = table1(10, 9);
    let got: Vec<(usize, usize, usize, usize)> =
        rows.iter().filter(|r| r.vertex_count >= 6).map(|r| (r.vertex_count, r.full, r.bi, r.tri)).collect();
    let want = vec![(6, 1, 1, 1), (7, 4, 4, 4), (8, 291, 291, 284), (9, 5849, 5846, 5461)];
    ensure(got == want, format!("got {got:?}"))?;
    Ok("g=10, r=6..9: full 1/4/291/5849, bi 1/4/291/5846, tri 1/4/284/5461".into())
}

fn gc2_cohomology() -> Outcome {
    let want: [(i64, &[(i64, usize)]); 5] = [(3, &[(0, 1)]), (4, &[]), (5, &[(0, 1)]), (6, &[(3, 1)]), (7, &[(0, 1)])];
    for (g, dims) in want {
        let report = cohomology_dims(g, Variant::Full).map_err(|e| e.to_string())?;
        let got = report.gc2_dims();
        ensure(got == dims.iter().copied().collect::<BTreeMap<_, _>>(), format!("g={g}: {got:?}"))?;
        ensure(report.within_vanishing_window(), format!("g={g}: class outside 0..=g-3"))?;
    }
    Ok("g=3..7 match {0:1}, {}, {0:1}, {3:1}, {0:1}; zero outside 0..=g-3".into())
}

fn quasi_isomorphism() -> Outcome {
    for g in 3..=7 {
        let report = verify_quasi_isomorphism(g, RankMethod::Exact).map_err(|e| e.to_string())?;
        ensure(report.pass, format!("g={g}: dimension tables differ"))?;
    }
    Ok("full, bi and tri cohomology agree for g=3..7".into())
}

fn chain_complex() -> Outcome {
    let mut products = 0;
    for g in 3..=6 {
        let bases: Vec<_> = (1..=2 * g as usize - 2).map(|r| build_all_bases(g, r)).collect();
        for v in 0..3 {
            let d: Vec<_> = (1..bases.len())
                .map(|i| differential_matrix(&bases[i][v], &bases[i - 1][v]).unwrap())
                .collect();
            for i in 1..d.len() {
                products += 1;
                ensure(d[i - 1].mul(&d[i]).is_zero(), format!("g={g} variant {v}: d^2 != 0 at r={}", i + 2))?;
            }
        }
    }
    let mut pairs = 0;
    for g in 2..=6 {
        let (n, bad) = adjointness(g);
        ensure(bad.is_none(), format!("adjointness fails at g={g}: {bad:?}"))?;
        pairs += n;
    }
    Ok(format!("{products} products d∘d = 0 (g=3..6, 3 variants); {pairs} adjoint pairs agree (g<=6)"))
}

fn identities() -> Outcome {
    let cheap = sample_classes(3, 6);
    let deep = sample_classes(3, 5);
    let candidate = identity_suite(Identity::CandidateRemovalHomotopy, &cheap, (3, 6));
    match &candidate.first_failure {
        Some((witness, size)) => println!(
            "  note: unweighted D with the anticommutator fails on {}/{} inputs (first {witness}, residual of {size} terms); using D = 1/2 Σ (-1)^(val+1) D_v with δ0D - Dδ0 = ∇",
            candidate.failed, candidate.checked
        ),
        None => return Err("the unweighted candidate unexpectedly holds".into()),
    }
    let mut checked = 0;
    for id in Identity::ALL {
        let (inputs, range) = if matches!(id, Identity::DeltaThree | Identity::DeltaFour) {
            (&deep, (3, 5))
        } else {
            (&cheap, (3, 6))
        };
        let report = identity_suite(id, inputs, range);
        ensure(report.checked > 0, format!("{}: no inputs", report.name))?;
        ensure(report.pass(), format!("{}: {} failures, first {:?}", report.name, report.failed, report.first_failure))?;
        checked += report.checked;
    }
    Ok(format!("{} identities exact on {checked} (identity, class) pairs, g<=6 (δ3, δ4: g<=5)", Identity::ALL.len()))
}

/// `N` from the tree adjacency alone: the number of tree edges at the first
/// leaf's neighbor when it is an S node, else 2.
fn independent_n(x: &LabeledGraph) -> usize {
    let tree = x.tree();
    let first = x.leaves()[0];
    let at = |v: usize| tree.tree_edges.iter().filter(move |&&(a, b)| a == v || b == v);
    let &(a, b) = at(first).next().unwrap();
    let w = if a == first { b } else { a };
    match tree.node(w).kind {
        NodeKind::S => at(w).count(),
        NodeKind::P | NodeKind::R => 2,
    }
}

fn homotopy() -> Outcome {
    let fig = three_leaf_graph();
    let reports = homotopy_check_all(&fig).map_err(|e| e.to_string())?;
    let mut ns: Vec<usize> = reports.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ensure(ns == vec![2, 3, 3], format!("three-leaf graph N values {ns:?}"))?;
    ensure(reports.iter().all(|r| r.pass && r.split_pass), "three-leaf graph fails")?;
    let mut checks = 0;
    let mut graphs = 0;
    for g in GraphSampler::new(2718, 10, 6, Shape::Split).take(200) {
        graphs += 1;
        let base = to_labeled(&g).map_err(|e| e.to_string())?;
        for &first in base.leaves() {
            let x = base.with_first_leaf(first).map_err(|e| e.to_string())?;
            let report = gcx_core::homotopy_check(&x).map_err(|e| e.to_string())?;
            ensure(n_value(&x) == independent_n(&x) && report.n == independent_n(&x), format!("N mismatch on {}", report.graph6))?;
            ensure(report.pass && report.split_pass, format!("fails on {} (first leaf {first})", report.graph6))?;
            checks += 1;
        }
    }
    Ok(format!("three-leaf graph under all 3 first leaves (N = 2, 3, 3); {checks} checks on {graphs} random graphs"))
}

fn spqr() -> Outcome {
    let mut trees = 0;
    for g in GraphSampler::new(31415, 10, 8, Shape::Biconnected).take(500) {
        let tree = SpqrTree::build(&g).map_err(|e| e.to_string())?;
        tree.validate(&g).map_err(|e| e.to_string())?;
        let back = tree.recompose().map_err(|e| e.to_string())?;
        ensure(canonical_form(&back).key == canonical_form(&g).key, "recomposition is not isomorphic")?;
        trees += 1;
    }
    let (mut confirmed, mut r_owned) = (0, 0);
    for g in GraphSampler::new(27182, 10, 8, Shape::Split).take(500) {
        let tree = SpqrTree::build(&g).map_err(|e| e.to_string())?;
        for e in 0..g.edge_count() {
            match check_contraction_case(&g, &tree, e).map_err(|e| e.to_string())? {
                CaseCheck::Confirmed(case) => {
                    confirmed += 1;
                    r_owned += (case == ContractionCase::RLocal) as usize;
                }
                CaseCheck::NotApplicable(_) => {}
                CaseCheck::Mismatch { case, detail } => return Err(format!("{case:?} on edge {e}: {detail}")),
            }
        }
    }
    ensure(confirmed >= 500, format!("only {confirmed} contraction samples"))?;
    Ok(format!("{trees} trees valid and recomposed; {confirmed} contraction cases confirmed ({r_owned} R-owned)"))
}

fn generator() -> Outcome {
    let mut classes = 0;
    for r in 1..=7usize {
        for k in 0..=r * (r - 1) / 2 {
            let keys = generate(r, k);
            let mut codes = BTreeSet::new();
            let mut orbit_total = 0;
            for key in &keys {
                let g = key.graph();
                ensure(g.vertex_count() == r && g.edge_count() == k, format!("{key} has the wrong size"))?;
                ensure(g.is_connected() && g.min_degree() >= 3, format!("{key} is not admissible"))?;
                let b = common::brute(&g);
                ensure(codes.insert(b.canonical), format!("{key} is generated twice"))?;
                orbit_total += common::factorial(r) / b.aut_order;
            }
            let labeled = common::labeled_count(r, k);
            ensure(orbit_total == labeled, format!("r={r} k={k}: orbits cover {orbit_total} of {labeled} labeled graphs"))?;
            classes += keys.len();
        }
    }
    Ok(format!("{classes} classes for r<=7 match labeled enumeration"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("10-loop basis dimensions", ten_loop_dimensions),
        ("cohomology of GC2", gc2_cohomology),
        ("full/bi/tri quasi-isomorphism", quasi_isomorphism),
        ("chain complex soundness", chain_complex),
        ("operator identities", identities),
        ("homotopy identity", homotopy),
        ("SPQR structure", spqr),
        ("generator oracle", generator),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({secs:.1}s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({secs:.1}s) {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
