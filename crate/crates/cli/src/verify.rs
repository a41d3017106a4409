use std::fmt::Write;

use anyhow::{bail, Result};
use gcx_core::complex::differential_matrix;
use gcx_core::dual::sample_classes;
use gcx_core::enumerate::build_all_bases;
use gcx_core::homotopy::homotopy_check_all;
use gcx_core::sample::{GraphSampler, Shape};
use gcx_core::spqr::{check_contraction_case, CaseCheck};
use gcx_core::{canonical_form, graph6, identity_suite, verify_quasi_isomorphism, Identity, RankMethod, SpqrTree};
use serde_json::{json, Value};

use crate::report::Report;
use crate::{Suite, VerifyArgs};

/// Rows plus a closing `PASS passed/total` line; `tally` overrides the
/// counted units (rows by default).
fn finish(header: &str, rows: Vec<(String, bool)>, json_rows: Vec<Value>, suite: &str, tally: Option<(usize, usize)>) -> Report {
    let pass = rows.iter().all(|r| r.1);
    let (passed, total) = tally.unwrap_or((rows.iter().filter(|r| r.1).count(), rows.len()));
    let mut tsv = format!("{header}\tstatus\n");
    for (line, ok) in &rows {
        let _ = writeln!(tsv, "{line}\t{}", if *ok { "pass" } else { "FAIL" });
    }
    let _ = writeln!(tsv, "{} {passed}/{total}", if pass { "PASS" } else { "FAIL" });
    let json = json!({ "suite": suite, "pass": pass, "passed": passed, "total": total, "rows": json_rows });
    Report { tsv, json, pass }
}

fn sampler(args: &VerifyArgs, default_loops: i64, shape: Shape) -> Result<GraphSampler> {
    let (_, max_g) = args.loop_range(default_loops);
    if args.max_vertices < 4 || max_g < 3 {
        bail!("sampling needs --max-vertices >= 4 and a loop bound >= 3");
    }
    if shape == Shape::Split && (args.max_vertices < 6 || max_g < 5) {
        bail!("graphs with two R leaves need --max-vertices >= 6 and a loop bound >= 5");
    }
    Ok(GraphSampler::new(args.seed, args.max_vertices, max_g, shape))
}

fn loop_bounds(args: &VerifyArgs, default: i64, cap: i64) -> Result<(i64, i64)> {
    let (lo, hi) = args.loop_range(default);
    if lo < 2 || hi > cap || lo > hi {
        bail!("loop orders {lo}..={hi} are outside 2..={cap}");
    }
    Ok((lo, hi))
}

fn d_squared(args: &VerifyArgs) -> Result<Report> {
    let (lo, hi) = loop_bounds(args, 6, 8)?;
    let (mut rows, mut out) = (Vec::new(), Vec::new());
    for g in lo..=hi {
        let bases: Vec<_> = (1..=2 * g as usize - 2).map(|r| build_all_bases(g, r)).collect();
        for v in 0..3 {
            let d = (1..bases.len())
                .map(|i| differential_matrix(&bases[i][v], &bases[i - 1][v]))
                .collect::<Result<Vec<_>, _>>()?;
            for i in 1..d.len() {
                let ok = d[i - 1].mul(&d[i]).is_zero();
                let variant = bases[0][v].variant;
                rows.push((format!("{variant}\t{g}\t{}", i + 2), ok));
                out.push(json!({ "variant": variant, "g": g, "r": i + 2, "pass": ok }));
            }
        }
    }
    Ok(finish("variant\tg\tr", rows, out, "d2", None))
}

fn theorem1(args: &VerifyArgs) -> Result<Report> {
    let (lo, hi) = loop_bounds(args, 6, 9)?;
    let (mut rows, mut out) = (Vec::new(), Vec::new());
    for g in lo.max(3)..=hi {
        let rep = verify_quasi_isomorphism(g, RankMethod::Auto)?;
        let dims: Vec<Vec<usize>> = rep.reports.iter().map(|r| r.rows.iter().map(|x| x.dim_h).collect()).collect();
        for (i, row) in rep.reports[0].rows.iter().enumerate() {
            let line = format!("{g}\t{}\t{}\t{}\t{}\t{}", row.r, row.gc2_degree, dims[0][i], dims[1][i], dims[2][i]);
            rows.push((line, dims[0][i] == dims[1][i] && dims[1][i] == dims[2][i]));
        }
        out.push(serde_json::to_value(&rep)?);
    }
    Ok(finish("g\tr\tgc2_degree\tH_full\tH_bi\tH_tri", rows, out, "theorem1", None))
}

fn identities(args: &VerifyArgs, ids: &[Identity], name: &str) -> Result<Report> {
    let (lo, hi) = loop_bounds(args, 5, 7)?;
    let inputs = sample_classes(lo, hi);
    let (mut rows, mut out) = (Vec::new(), Vec::new());
    for &id in ids {
        let rep = identity_suite(id, &inputs, (lo, hi));
        let witness = rep.first_failure.as_ref().map_or("-".to_string(), |(g, n)| format!("{g} ({n} terms)"));
        rows.push((format!("{}\t{lo}..{hi}\t{}\t{}\t{witness}", rep.name, rep.checked, rep.failed), rep.pass()));
        out.push(serde_json::to_value(&rep)?);
    }
    let mut report = finish("identity\tloops\tchecked\tfailed\tfirst_failure", rows, out, name, None);
    if ids.contains(&Identity::RemovalHomotopy) {
        let cand = identity_suite(Identity::CandidateRemovalHomotopy, &inputs, (lo, hi));
        if let Some((g, _)) = &cand.first_failure {
            let _ = writeln!(
                report.tsv,
                "# unweighted D with the anticommutator fails on {}/{} inputs (first {g}); D = 1/2 sum_v (-1)^(val v + 1) D_v is used",
                cand.failed, cand.checked
            );
        }
        report.json["candidate"] = serde_json::to_value(&cand)?;
    }
    Ok(report)
}

fn homotopy(args: &VerifyArgs) -> Result<Report> {
    let (mut rows, mut out) = (Vec::new(), Vec::new());
    let mut per_graph = Vec::new();
    for g in sampler(args, 6, Shape::Split)?.take(args.samples) {
        let s = graph6::encode(&g);
        match homotopy_check_all(&g) {
            Ok(reports) => {
                per_graph.push(reports.iter().all(|r| r.pass && r.split_pass));
                for r in reports {
                    let line = format!("{}\t{}\t{}\t{}", r.graph6, r.leaf_count, r.first_leaf, r.n);
                    rows.push((line, r.pass && r.split_pass));
                    out.push(serde_json::to_value(&r)?);
                }
            }
            Err(e) => {
                per_graph.push(false);
                rows.push((format!("{s}\t-\t-\t-\t{e}"), false));
                out.push(json!({ "graph6": s, "error": e.to_string() }));
            }
        }
    }
    // the closing line counts graphs, each checked under every first leaf
    let passed = per_graph.iter().filter(|&&p| p).count();
    Ok(finish("graph6\tk\tfirst_leaf\tN", rows, out, "homotopy", Some((passed, per_graph.len()))))
}

fn spqr_roundtrip(args: &VerifyArgs) -> Result<Report> {
    let (mut rows, mut out) = (Vec::new(), Vec::new());
    for g in sampler(args, 8, Shape::Biconnected)?.take(args.samples) {
        let s = graph6::encode(&g);
        let checked = SpqrTree::build(&g).and_then(|t| {
            t.validate(&g)?;
            let back = t.recompose()?;
            Ok((t.nodes.len(), canonical_form(&back).key == canonical_form(&g).key))
        });
        let (line, ok, detail) = match checked {
            Ok((nodes, iso)) => (format!("{s}\t{nodes}"), iso, if iso { "ok".into() } else { "not isomorphic".into() }),
            Err(e) => (format!("{s}\t-"), false, e.to_string()),
        };
        out.push(json!({ "graph6": s, "pass": ok, "detail": detail }));
        rows.push((if ok { line } else { format!("{line}\t{detail}") }, ok));
    }
    Ok(finish("graph6\tnodes", rows, out, "spqr-roundtrip", None))
}

fn contraction_case(args: &VerifyArgs) -> Result<Report> {
    let (mut rows, mut out) = (Vec::new(), Vec::new());
    let mut graphs = sampler(args, 8, Shape::Split)?;
    while rows.len() < args.samples {
        let g = graphs.sample();
        let s = graph6::encode(&g);
        let tree = SpqrTree::build(&g)?;
        for e in 0..g.edge_count() {
            if rows.len() == args.samples {
                break;
            }
            let (case, ok, detail) = match check_contraction_case(&g, &tree, e)? {
                CaseCheck::Confirmed(c) => (c, true, "confirmed".to_string()),
                CaseCheck::NotApplicable(_) => continue,
                CaseCheck::Mismatch { case, detail } => (case, false, detail),
            };
            rows.push((format!("{s}\t{e}\t{case:?}\t{detail}"), ok));
            out.push(json!({ "graph6": s, "edge": e, "case": case, "pass": ok, "detail": detail }));
        }
    }
    Ok(finish("graph6\tedge\tcase\tdetail", rows, out, "contraction-case", None))
}

pub fn run(args: &VerifyArgs) -> Result<Report> {
    match args.suite {
        Suite::D2 => d_squared(args),
        Suite::Theorem1 => theorem1(args),
        Suite::Kwz => identities(
            args,
            &[Identity::DeformedSquare, Identity::RemovalHomotopy, Identity::RemovalSquared, Identity::RemovalAnticommutes],
            "kwz",
        ),
        Suite::Zivkovic => identities(
            args,
            &[Identity::ProjectedHomotopy, Identity::ProjectedSquared, Identity::ProjectedAnticommutes],
            "zivkovic",
        ),
        Suite::Deltak => identities(args, &[Identity::DeltaTwo, Identity::DeltaThree, Identity::DeltaFour], "deltak"),
        Suite::Homotopy => homotopy(args),
        Suite::SpqrRoundtrip => spqr_roundtrip(args),
        Suite::ContractionCase => contraction_case(args),
    }
}
