//! Edge-contraction differentials, cohomology dimensions and the comparison
//! of the full, biconnected and triconnected complexes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonKey};
use crate::connectivity::connectivity_class;
use crate::enumerate::{build_all_bases, Basis, Variant};
use crate::error::ComplexError;
use crate::graph::{Contraction, SimpleGraph};
use crate::linalg::{rank_with, RankMethod, SparseRationalMatrix};

/// Terms of `d(γ)` for a graph with its own edge order as orientation:
/// `Σ_j (−1)^j (γ/e_j)` over 0-based positions `j`, dropping non-simple
/// contractions, orientation-zero images, and (for the quotients) images
/// below the variant's connectivity threshold. Terms are not merged.
pub fn contraction_terms(g: &SimpleGraph, variant: Variant) -> Vec<(CanonKey, i64)> {
    let mut out = Vec::new();
    for j in 0..g.edge_count() {
        let Contraction::Graph(h) = g.contract_edge(j) else { continue };
        let class = canonical_form(&h);
        if class.is_zero {
            continue;
        }
        if variant != Variant::Full && connectivity_class(&h).map_or(true, |c| c < variant.threshold()) {
            continue;
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        out.push((class.key, sign * class.sign as i64));
    }
    out
}

/// Matrix of `d: V_source → V_target`, one column per source basis class.
pub fn differential_matrix(source: &Basis, target: &Basis) -> Result<SparseRationalMatrix, ComplexError> {
    let columns: Vec<Result<Vec<(usize, i64)>, ComplexError>> = source
        .keys
        .par_iter()
        .map(|key| {
            let mut col = Vec::new();
            for (image, c) in contraction_terms(&key.graph(), source.variant) {
                let row = target.position(&image).ok_or_else(|| ComplexError::ImageOutsideBasis {
                    key: image.to_string(),
                    g: target.loop_order,
                    r: target.vertex_count,
                })?;
                col.push((row, c));
            }
            Ok(col)
        })
        .collect();
    let mut m = SparseRationalMatrix::new(target.dim(), source.dim());
    for (j, col) in columns.into_iter().enumerate() {
        for (i, c) in col? {
            m.add(i, j, BigRational::from_integer(c.into()));
        }
    }
    Ok(m)
}

/// Largest vertex count of a ≥3-valent graph of loop order `g`.
pub fn max_vertices(g: i64) -> usize {
    (2 * g - 2).max(0) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeRow {
    pub g: i64,
    pub r: usize,
    pub degree_n0: i64,
    /// `k − 2(r − 1)`.
    pub degree_n2: i64,
    /// Cohomological degree in the vertex-splitting complex with `n = 2`,
    /// `r − g − 1` (K4 sits in degree 0).
    pub gc2_degree: i64,
    pub dim_basis: usize,
    pub rank_out: usize,
    pub rank_in: usize,
    pub dim_h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub loop_order: i64,
    pub variant: Variant,
    pub rows: Vec<GradeRow>,
}

impl CohomologyReport {
    /// Nonzero cohomology dimensions keyed by the `n = 2` degree.
    pub fn gc2_dims(&self) -> BTreeMap<i64, usize> {
        self.rows.iter().filter(|r| r.dim_h > 0).map(|r| (r.gc2_degree, r.dim_h)).collect()
    }

    /// Whether all cohomology lies in degrees `0..=g-3`.
    pub fn within_vanishing_window(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.dim_h == 0 || (0..=self.loop_order - 3).contains(&r.gc2_degree))
    }

    pub const TSV_HEADER: &'static str =
        "variant\tg\tr\tdegree_n0\tdegree_n2\tgc2_degree\tdim_basis\trank_out\trank_in\tdim_H";

    pub fn tsv_rows(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                self.variant, r.g, r.r, r.degree_n0, r.degree_n2, r.gc2_degree, r.dim_basis, r.rank_out, r.rank_in, r.dim_h
            );
        }
        s
    }
}

/// Bases of every vertex count for loop order `g`, all three variants.
fn bases_for_loop_order(g: i64) -> Vec<[Basis; 3]> {
    (1..=max_vertices(g)).into_par_iter().map(|r| build_all_bases(g, r)).collect()
}

fn report_from_bases(g: i64, variant: Variant, bases: &[&Basis], method: RankMethod) -> Result<CohomologyReport, ComplexError> {
    // bases[i] has i + 1 vertices; d_r maps r to r - 1
    let diffs: Vec<SparseRationalMatrix> = (1..bases.len())
        .into_par_iter()
        .map(|i| differential_matrix(bases[i], bases[i - 1]))
        .collect::<Result<_, _>>()?;
    for i in 1..diffs.len() {
        // d_{r-1} ∘ d_r with r = i + 2
        if !diffs[i - 1].mul(&diffs[i]).is_zero() {
            return Err(ComplexError::NonzeroSquare { g, r: i + 2, target: i, variant: variant.to_string() });
        }
    }
    let ranks: Vec<usize> = diffs.par_iter().map(|m| rank_with(m, method)).collect();
    let rows = bases
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let r = i + 1;
            let k = g + r as i64 - 1;
            let rank_out = if i >= 1 { ranks[i - 1] } else { 0 };
            let rank_in = ranks.get(i).copied().unwrap_or(0);
            GradeRow {
                g,
                r,
                degree_n0: -k,
                degree_n2: k - 2 * (r as i64 - 1),
                gc2_degree: r as i64 - g - 1,
                dim_basis: b.dim(),
                rank_out,
                rank_in,
                dim_h: b.dim() - rank_out - rank_in,
            }
        })
        .collect();
    Ok(CohomologyReport { loop_order: g, variant, rows })
}

pub fn cohomology_dims(g: i64, variant: Variant) -> Result<CohomologyReport, ComplexError> {
    cohomology_dims_with(g, variant, RankMethod::Auto)
}

pub fn cohomology_dims_with(g: i64, variant: Variant, method: RankMethod) -> Result<CohomologyReport, ComplexError> {
    if !(2..=12).contains(&g) {
        return Err(ComplexError::LoopOrder(g));
    }
    let all = bases_for_loop_order(g);
    let vi = variant as usize;
    let bases: Vec<&Basis> = all.iter().map(|b| &b[vi]).collect();
    report_from_bases(g, variant, &bases, method)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasiIsoReport {
    pub loop_order: i64,
    pub reports: Vec<CohomologyReport>,
    pub pass: bool,
}

/// Cohomology of the full, biconnected and triconnected complexes; passes
/// iff the three dimension tables agree in every degree.
pub fn verify_quasi_isomorphism(g: i64, method: RankMethod) -> Result<QuasiIsoReport, ComplexError> {
    if !(2..=12).contains(&g) {
        return Err(ComplexError::LoopOrder(g));
    }
    let all = bases_for_loop_order(g);
    let reports = Variant::ALL
        .iter()
        .map(|&v| {
            let bases: Vec<&Basis> = all.iter().map(|b| &b[v as usize]).collect();
            report_from_bases(g, v, &bases, method)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dims = |r: &CohomologyReport| r.rows.iter().map(|x| x.dim_h).collect::<Vec<_>>();
    let pass = reports.windows(2).all(|w| dims(&w[0]) == dims(&w[1]));
    Ok(QuasiIsoReport { loop_order: g, reports, pass })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub vertex_count: usize,
    pub full: usize,
    pub bi: usize,
    pub tri: usize,
}

impl Table1Row {
    /// Share of `part` in the full dimension, rounded down.
    pub fn percent(&self, part: usize) -> usize {
        (part * 100).checked_div(self.full).unwrap_or(0)
    }
}

/// Basis dimensions of the three complexes at loop order `g` for every
/// vertex count up to `max_vertices`.
pub fn table1(g: i64, max_vertices_cap: usize) -> Vec<Table1Row> {
    (1..=max_vertices_cap.min(max_vertices(g)))
        .filter_map(|r| {
            let k = g + r as i64 - 1;
            if k < 0 || k as usize > r * (r - 1) / 2 {
                return None;
            }
            let [f, b, t] = build_all_bases(g, r);
            Some(Table1Row { vertex_count: r, full: f.dim(), bi: b.dim(), tri: t.dim() })
        })
        .collect()
}

pub fn table1_tsv(rows: &[Table1Row]) -> String {
    let mut s = String::from("vertices\tfull\tbi\ttri\tbi_percent\ttri_percent\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.vertex_count,
            r.full,
            r.bi,
            r.tri,
            r.percent(r.bi),
            r.percent(r.tri)
        );
    }
    s
}
