//! `gcx`: enumeration, cohomology and verification runs from the command line.

mod report;
mod verify;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gcx_core::complex::{cohomology_dims_with, table1, table1_tsv, CohomologyReport};
use gcx_core::{build_basis, graph6, RankMethod, SpqrTree, Variant};
use serde_json::json;

use report::{spqr_tsv, Report};

#[derive(Parser, Debug)]
#[command(name = "gcx", version, about = "Exact computations in the Kontsevich graph complex")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "GCX_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Full,
    Bi,
    Tri,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Full => Variant::Full,
            VariantArg::Bi => Variant::Bi,
            VariantArg::Tri => Variant::Tri,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RankArg {
    Exact,
    Modular,
    Auto,
}

impl From<RankArg> for RankMethod {
    fn from(r: RankArg) -> RankMethod {
        match r {
            RankArg::Exact => RankMethod::Exact,
            RankArg::Modular => RankMethod::Modular,
            RankArg::Auto => RankMethod::Auto,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Basis classes of one grade as a graph6 stream.
    Enumerate {
        #[arg(long)]
        loops: i64,
        #[arg(long)]
        vertices: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Full)]
        variant: VariantArg,
    },
    /// Basis dimensions of all three complexes at one loop order.
    Dims {
        #[arg(long)]
        loops: i64,
        #[arg(long)]
        max_vertices: Option<usize>,
    },
    /// Cohomology dimensions at one loop order.
    Cohomology {
        #[arg(long)]
        loops: i64,
        #[arg(long, value_enum, default_value_t = VariantArg::Full)]
        variant: VariantArg,
        #[arg(long, value_enum, default_value_t = RankArg::Auto)]
        rank: RankArg,
    },
    /// SPQR tree of a graph6 string (read from stdin when omitted).
    Spqr { graph6: Option<String> },
    /// Basis dimensions in the layout of the 10-loop comparison table.
    Table1 {
        #[arg(long, default_value_t = 9)]
        max_vertices: usize,
        #[arg(long, default_value_t = 10)]
        loops: i64,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    D2,
    Theorem1,
    Kwz,
    Zivkovic,
    Deltak,
    Homotopy,
    SpqrRoundtrip,
    ContractionCase,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Check a single loop order.
    #[arg(long, conflicts_with = "max_loops")]
    pub loops: Option<i64>,
    /// Check every loop order from 3 up to this bound.
    #[arg(long)]
    pub max_loops: Option<i64>,
    /// Vertex cap for sampled graphs.
    #[arg(long, default_value_t = 10)]
    pub max_vertices: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl VerifyArgs {
    /// Loop orders to check; `default` is the upper bound when none is given.
    pub fn loop_range(&self, default: i64) -> (i64, i64) {
        match (self.loops, self.max_loops) {
            (Some(g), _) => (g, g),
            (None, Some(m)) => (3, m),
            (None, None) => (3, default),
        }
    }
}

fn check_loops(g: i64) -> Result<()> {
    if !(2..=12).contains(&g) {
        bail!("loop order {g} is outside 2..=12");
    }
    Ok(())
}

fn read_graph6(arg: Option<String>) -> Result<Vec<String>> {
    if let Some(s) = arg {
        return Ok(vec![s]);
    }
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
    let lines: Vec<String> =
        text.lines().map(|l| l.trim().trim_start_matches(">>graph6<<").to_string()).filter(|l| !l.is_empty()).collect();
    if lines.is_empty() {
        bail!("no graph6 input");
    }
    Ok(lines)
}

fn cohomology_report(r: &CohomologyReport) -> Report {
    let mut tsv = format!("{}\n{}", CohomologyReport::TSV_HEADER, r.tsv_rows());
    for (k, d) in r.gc2_dims() {
        tsv.push_str(&format!("# H^{k}(GC2, g={}) = {d}\n", r.loop_order));
    }
    Report::ok(tsv, serde_json::to_value(r).expect("serializable"))
}

fn run(cli: Cli) -> Result<Report> {
    Ok(match cli.command {
        Command::Enumerate { loops, vertices, variant } => {
            check_loops(loops)?;
            let basis = build_basis(loops, vertices, variant.into());
            let keys: Vec<&str> = basis.keys.iter().map(|k| k.as_str()).collect();
            Report::ok(basis.to_graph6_stream(), json!({ "loops": loops, "vertices": vertices, "variant": basis.variant, "graph6": keys }))
        }
        Command::Dims { loops, max_vertices } => {
            check_loops(loops)?;
            let rows = table1(loops, max_vertices.unwrap_or(usize::MAX));
            Report::ok(table1_tsv(&rows), serde_json::to_value(&rows)?)
        }
        Command::Cohomology { loops, variant, rank } => {
            check_loops(loops)?;
            cohomology_report(&cohomology_dims_with(loops, variant.into(), rank.into())?)
        }
        Command::Spqr { graph6: arg } => {
            let mut trees = Vec::new();
            let mut tsv = String::new();
            for s in read_graph6(arg)? {
                let g = graph6::decode(&s).with_context(|| format!("decoding {s}"))?;
                let tree = SpqrTree::build(&g).with_context(|| format!("SPQR tree of {s}"))?;
                tsv.push_str(&format!("# {s}\n{}", spqr_tsv(&tree)));
                trees.push(json!({ "graph6": s, "tree": tree }));
            }
            let value = if trees.len() == 1 { trees.pop().unwrap() } else { serde_json::Value::Array(trees) };
            Report::ok(tsv, value)
        }
        Command::Table1 { max_vertices, loops } => {
            check_loops(loops)?;
            let rows: Vec<_> = table1(loops, max_vertices).into_iter().filter(|r| r.full > 0).collect();
            Report::ok(table1_tsv(&rows), serde_json::to_value(&rows)?)
        }
        Command::Verify(args) => verify::run(&args)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (format, out) = (cli.format, cli.out.clone());
    match run(cli) {
        Ok(report) => {
            let text = match format {
                Format::Tsv => report.tsv,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            let written = match &out {
                Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            eprintln!("see `gcx --help` for usage");
            ExitCode::from(2)
        }
    }
}
