//! The `gape-kit` command line.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, invalid
//! parameters, unreadable or mismatched inputs), 2 for numerical failures
//! (solver breakdown, divergence, failed verification).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::baseline::{
    lape, minmax_columns, ppr_diag_encoding, pprp_encoding, reference_sinusoidal, rw_encoding, DEFAULT_BETA,
};
use crate::compare::{compare, Comparison};
use crate::encoding::{write_csv, EncodingMatrix, Scheme};
use crate::error::{Error, Result};
use crate::fit::{fit_to_target, FitConfig, FitSummary, Optimizer};
use crate::graph::{csl_graph, cycle_graph, erdos_renyi, string_graph, LabeledGraph};
use crate::sylvester::Strategy;
use crate::verify::{self, Suite};
use crate::wgwa::{encode_gape, init_damped, sinusoidal_wgwa};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gape-kit", version, about = "Graph positional encodings from weighted graph-walking automata")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph as JSON.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Compute a positional encoding and write it as CSV plus a `.meta.json` sidecar.
    Encode(EncodeArgs),
    /// Compare two encoding CSVs.
    Compare(CompareArgs),
    /// Fit automaton weights so that GAPE reproduces a target encoding.
    Fit(FitArgs),
    /// Run built-in equivalence checks.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Directed path; the first node has label 1, the rest label 2.
    Path {
        #[arg(long)]
        length: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Erdős–Rényi G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, env = "GAPE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Circular skip link graph: a cycle plus chords i ↔ i + skip.
    Csl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        skip: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Gape,
    Lape,
    Rw,
    Ppr,
    Pprp,
    Sinusoidal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Kronecker,
    #[value(alias = "fixed_point")]
    FixedPoint,
    Schur,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Kronecker => Strategy::Kronecker,
            StrategyArg::FixedPoint => Strategy::FixedPoint,
            StrategyArg::Schur => Strategy::Schur,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SinusoidalVia {
    /// GAPE with the rotation automaton on the given graph.
    Wgwa,
    /// Closed-form sin/cos table with one row per node.
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Prop1,
    #[value(name = "lape_remark", alias = "lape-remark")]
    LapeRemark,
    #[value(name = "ppr_k1", alias = "ppr-k1")]
    PprK1,
    Solvers,
    #[value(name = "pprp_rw", alias = "pprp-rw")]
    PprpRw,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Prop1 => Suite::Prop1,
            SuiteArg::LapeRemark => Suite::LapeRemark,
            SuiteArg::PprK1 => Suite::PprK1,
            SuiteArg::Solvers => Suite::Solvers,
            SuiteArg::PprpRw => Suite::PprpRw,
        }
    }
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// Graph JSON file.
    pub graph: PathBuf,
    #[arg(value_enum)]
    pub scheme: SchemeArg,
    /// Output CSV; the sidecar goes next to it.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Encoding dimension: automaton states for gape and sinusoidal, k_enc otherwise.
    #[arg(long, default_value_t = 16)]
    pub k: usize,
    /// Damping of the random initial μ (gape).
    #[arg(long, default_value_t = 0.02)]
    pub gamma: f64,
    /// PageRank damping (ppr, pprp).
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, env = "GAPE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    pub strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = SinusoidalVia::Wgwa)]
    pub via: SinusoidalVia,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    /// Min-max normalize every column of both inputs first.
    #[arg(long)]
    pub normalize: bool,
    /// Also write the statistics as JSON.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitTarget {
    Lape,
    Rw,
    Pprp,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = FitTarget::Lape)]
    pub target: FitTarget,
    /// Target dimension (defaults to the node count).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, default_value_t = 10)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 3e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 0.8)]
    pub lr_decay: f64,
    /// Initial damping; defaults to 0.5/ρ(A).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub plain_gd: bool,
    #[arg(long, env = "GAPE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Run several seeds and average (e.g. `--seeds 0,1,2,3`); overrides `--seed`.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Schur)]
    pub strategy: StrategyArg,
    /// Result JSON; fitted weights go to `<stem>.mu.csv` and `<stem>.alpha.csv`.
    #[arg(short, long)]
    pub out: PathBuf,
}

/// Outcome of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub artifacts: Vec<PathBuf>,
    pub summary: String,
}

impl CommandResult {
    fn ok(artifacts: Vec<PathBuf>, summary: impl Into<String>) -> Self {
        CommandResult {
            exit_code: EXIT_OK,
            artifacts,
            summary: summary.into(),
        }
    }

    fn failed(err: &Error) -> Self {
        CommandResult {
            exit_code: exit_code_for(err),
            artifacts: Vec::new(),
            summary: format!("error: {err}"),
        }
    }
}

/// 1 for bad input, 2 for numerical trouble.
pub fn exit_code_for(err: &Error) -> i32 {
    match err.root() {
        Error::InvalidParameter(_)
        | Error::InvalidGraph(_)
        | Error::IsolatedNode { .. }
        | Error::LabelOutOfRange { .. }
        | Error::Dimension(_)
        | Error::Parse(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::InvalidRun { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

/// Parses `args` (including the program name) and runs the command. Help and
/// version requests exit 0; every other parse error exits 1.
pub fn run_from<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let exit_code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            CommandResult {
                exit_code,
                artifacts: Vec::new(),
                summary: e.render().to_string(),
            }
        }
    }
}

pub fn run(cli: Cli) -> CommandResult {
    match cli.command {
        Command::Generate { family } => generate(family).unwrap_or_else(|e| CommandResult::failed(&e)),
        Command::Encode(args) => encode(&args).unwrap_or_else(|e| CommandResult::failed(&e)),
        Command::Compare(args) => compare_files(&args).unwrap_or_else(|e| CommandResult::failed(&e)),
        Command::Fit(args) => fit(&args).unwrap_or_else(|e| fit_failure(&e)),
        Command::Verify { suite } => run_verify(suite.into()),
    }
}

fn generate(family: Family) -> Result<CommandResult> {
    let (g, out, what) = match family {
        Family::Path { length, out } => (string_graph(length)?, out, format!("path of length {length}")),
        Family::Cycle { n, out } => (cycle_graph(n)?, out, format!("cycle on {n} nodes")),
        Family::Er { n, p, seed, out } => (erdos_renyi(n, p, seed)?, out, format!("G({n}, {p}) with seed {seed}")),
        Family::Csl { n, skip, out } => (csl_graph(n, skip)?, out, format!("CSL({n}, {skip})")),
    };
    let summary = format!("{what}: {} nodes, {} edges", g.n(), g.edge_count());
    match out {
        Some(path) => {
            g.save(&path)?;
            Ok(CommandResult::ok(vec![path], summary))
        }
        None => Ok(CommandResult::ok(Vec::new(), format!("{}\n{summary}", g.to_json()))),
    }
}

/// Computes the encoding requested by `args` for `g`.
pub fn compute_encoding(g: &LabeledGraph, args: &EncodeArgs) -> Result<EncodingMatrix> {
    let strategy = Strategy::from(args.strategy);
    match args.scheme {
        SchemeArg::Gape => {
            let w = init_damped(args.k, g.label_count(), args.gamma, args.seed)?;
            let (enc, _) = encode_gape(g, &w, strategy)?;
            Ok(enc.with_meta(|m| {
                m.gamma = Some(args.gamma);
                m.seed = Some(args.seed);
            }))
        }
        SchemeArg::Lape => lape(g, args.k),
        SchemeArg::Rw => rw_encoding(g, args.k),
        SchemeArg::Ppr => ppr_diag_encoding(g, args.beta),
        SchemeArg::Pprp => pprp_encoding(g, args.beta, args.k),
        SchemeArg::Sinusoidal => match args.via {
            SinusoidalVia::Reference => reference_sinusoidal(g.n(), args.k),
            SinusoidalVia::Wgwa => {
                let (enc, _) = encode_gape(g, &sinusoidal_wgwa(args.k)?, strategy)?;
                Ok(EncodingMatrix {
                    scheme: Scheme::Sinusoidal,
                    ..enc
                })
            }
        },
    }
}

fn encode(args: &EncodeArgs) -> Result<CommandResult> {
    let g = LabeledGraph::load(&args.graph)?;
    let enc = compute_encoding(&g, args)?;
    let artifacts = enc.write(&args.out)?;
    let mut summary = format!("{} encoding: {}x{}", enc.scheme, enc.nodes(), enc.dim());
    if let Some(rep) = &enc.meta.solver {
        summary += &format!(
            " ({} solver, residual {:e}, rho product {:.4})",
            rep.method, rep.residual, rep.rho_product
        );
    }
    Ok(CommandResult::ok(artifacts, summary))
}

#[derive(Serialize)]
struct CompareJson<'a> {
    a: &'a Path,
    b: &'a Path,
    normalized: bool,
    min_column_pearson: Option<f64>,
    min_node_pearson: Option<f64>,
    #[serde(flatten)]
    stats: &'a Comparison,
}

fn compare_files(args: &CompareArgs) -> Result<CommandResult> {
    let a = EncodingMatrix::read(&args.a, Scheme::Gape)?;
    let b = EncodingMatrix::read(&args.b, Scheme::Gape)?;
    let (va, vb) = if args.normalize {
        (minmax_columns(&a.values), minmax_columns(&b.values))
    } else {
        (a.values, b.values)
    };
    let stats = compare(&va, &vb)?;
    let doc = CompareJson {
        a: &args.a,
        b: &args.b,
        normalized: args.normalize,
        min_column_pearson: stats.min_column_pearson(),
        min_node_pearson: stats.min_node_pearson(),
        stats: &stats,
    };
    let json = serde_json::to_string_pretty(&doc)?;
    let mut artifacts = Vec::new();
    if let Some(out) = &args.out {
        std::fs::write(out, json.clone() + "\n")?;
        artifacts.push(out.clone());
    }
    Ok(CommandResult::ok(artifacts, json))
}

#[derive(Serialize)]
struct MultiSeedJson {
    seeds: Vec<u64>,
    mean_final_mse: f64,
    mean_initial_mse: f64,
    mean_mu_frobenius: f64,
    runs: Vec<FitSummary>,
}

/// `<out stem><suffix>`, next to `out`.
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("fit");
    out.with_file_name(format!("{stem}{suffix}"))
}

fn fit(args: &FitArgs) -> Result<CommandResult> {
    let g = LabeledGraph::load(&args.graph)?;
    let k = args.k.unwrap_or(g.n());
    let target = match args.target {
        FitTarget::Lape => lape(&g, k)?,
        FitTarget::Rw => rw_encoding(&g, k)?,
        FitTarget::Pprp => pprp_encoding(&g, args.beta, k)?,
    };
    let seeds = if args.seeds.is_empty() {
        vec![args.seed]
    } else {
        args.seeds.clone()
    };
    let base = FitConfig {
        epochs: args.epochs,
        steps_per_epoch: args.steps,
        lr: args.lr,
        lr_decay: args.lr_decay,
        solver_strategy: args.strategy.into(),
        optimizer: if args.plain_gd {
            Optimizer::GradientDescent
        } else {
            Optimizer::Adam
        },
        gamma: args.gamma,
        ..FitConfig::default()
    };
    base.validate()?;

    let mut artifacts = Vec::new();
    let mut summaries = Vec::new();
    for &seed in &seeds {
        let cfg = FitConfig { seed, ..base.clone() };
        let result = fit_to_target(&g, &target, &cfg).map_err(|e| e.context(format!("seed {seed}")))?;
        let tag = if seeds.len() == 1 {
            String::new()
        } else {
            format!(".seed{seed}")
        };
        for (name, m) in [("mu", &result.fitted.mu), ("alpha", &result.fitted.alpha)] {
            let path = sibling(&args.out, &format!("{tag}.{name}.csv"));
            std::fs::write(&path, write_csv(m))?;
            artifacts.push(path);
        }
        summaries.push(result.summary());
    }

    let mean = |f: fn(&FitSummary) -> f64| summaries.iter().map(f).sum::<f64>() / summaries.len() as f64;
    let (final_mse, mu_norm) = (mean(|s| s.final_mse), mean(|s| s.mu_frobenius));
    let json = if summaries.len() == 1 {
        serde_json::to_string_pretty(&summaries[0])?
    } else {
        serde_json::to_string_pretty(&MultiSeedJson {
            seeds: seeds.clone(),
            mean_final_mse: final_mse,
            mean_initial_mse: mean(|s| s.initial_mse),
            mean_mu_frobenius: mu_norm,
            runs: summaries,
        })?
    };
    std::fs::write(&args.out, json + "\n")?;
    artifacts.insert(0, args.out.clone());
    Ok(CommandResult::ok(
        artifacts,
        format!(
            "fit to {:?} over {} seed(s): mean final MSE {final_mse:e}, mean |mu|_F {mu_norm:.4}",
            args.target,
            seeds.len()
        ),
    ))
}

fn fit_failure(err: &Error) -> CommandResult {
    let mut res = CommandResult::failed(err);
    if let Error::Diverged { trace, .. } = err.root() {
        res.summary += &format!("\npartial loss trace: {trace:?}");
    }
    res
}

fn run_verify(suite: Suite) -> CommandResult {
    let report = verify::run(suite);
    CommandResult {
        exit_code: if report.passed() { EXIT_OK } else { EXIT_NUMERICAL },
        artifacts: Vec::new(),
        summary: report.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CommandResult {
        run_from(std::iter::once("gape-kit").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["generate", "cycle", "--n", "2"]).exit_code, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).exit_code, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).exit_code, EXIT_OK);
    }

    #[test]
    fn generate_to_stdout() {
        let res = run_args(&["generate", "csl", "--n", "41", "--skip", "10"]);
        assert_eq!(res.exit_code, EXIT_OK);
        assert!(res.artifacts.is_empty());
        assert!(res.summary.ends_with("41 nodes, 82 edges"));
    }

    #[test]
    fn error_classes() {
        assert_eq!(exit_code_for(&Error::IllPosed { rho_product: 2.0 }), EXIT_NUMERICAL);
        assert_eq!(
            exit_code_for(&Error::InvalidParameter("x".into()).context("outer")),
            EXIT_USAGE
        );
        let diverged = Error::Diverged {
            step: 3,
            loss: f64::INFINITY,
            trace: vec![1.0, 2.0],
        };
        let res = fit_failure(&diverged.context("seed 0"));
        assert_eq!(res.exit_code, EXIT_NUMERICAL);
        assert!(res.summary.contains("[1.0, 2.0]"));
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(sibling(Path::new("out/fit.json"), ".mu.csv"), PathBuf::from("out/fit.mu.csv"));
    }
}
