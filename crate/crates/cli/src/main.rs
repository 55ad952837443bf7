//! `schrom`: generate random graphs, color and search partitions, run the
//! Monte Carlo lemma checks and batch experiments.
//!
//! Exit codes: 0 success, 2 structured failure (no object found or none
//! exists), 1 usage, input or I/O error.

mod commands;
mod meta;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "schrom",
    version,
    about = "Strong colorings and independent transversals of random graphs"
)]
pub struct Cli {
    /// Root seed of every random choice in the run.
    #[arg(long, global = true, env = "SCHROM_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample G(n, p) and write it as an edge list (or JSON for a .json path).
    Gen(GenArgs),
    /// Strongly color a partitioned graph and write a verified certificate.
    Color(ColorArgs),
    /// Find an independent transversal of a partition.
    Transversal(TransversalArgs),
    /// Exact strong chromatic number of a tiny graph.
    SchromExact(ExactArgs),
    /// Monte Carlo checks of random-graph properties; writes CSV.
    Lemmas(LemmaArgs),
    /// Success of the dense decomposition at k = Δ+1 over a grid; writes CSV.
    Experiment(ExperimentArgs),
    /// Rerun a command from its metadata file and compare the outputs.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    EdgeList,
    Json,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to the format implied by the extension.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Args, Debug)]
#[group(id = "partition_source", required = true, multiple = false, args = ["partition", "random_partition"])]
pub struct PartitionArgs {
    /// Partition file `{"k":..,"parts":[[..],..]}`; the graph is padded to cover it.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Use a seeded uniform partition into parts of size K, padding the graph as needed.
    #[arg(long, value_name = "K")]
    pub random_partition: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    Auto,
    PinMaxDegree,
    Uniform,
}

#[derive(Args, Debug)]
pub struct ColorArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 100)]
    pub hall_retry_budget: u32,
    #[arg(long, default_value_t = 3)]
    pub restart_budget: u32,
    /// Edge probability used for the np thresholds; estimated from the graph if absent.
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Greedy,
    Lll,
    Sparse,
}

#[derive(Args, Debug)]
pub struct TransversalArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[arg(long, value_enum, default_value = "lll")]
    pub algo: Algo,
    /// Vertex forced into the transversal, as PART:VERTEX; repeatable.
    #[arg(long = "pin", value_name = "PART:VERTEX")]
    pub pins: Vec<String>,
    /// Redraw cap for lll; defaults to 100 times the edge count.
    #[arg(long)]
    pub cap: Option<u64>,
    /// Slack of the sparse construction.
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Largest n accepted.
    #[arg(long, default_value_t = schrom::coloring::exact::DEFAULT_SIZE_GUARD)]
    pub guard: usize,
    /// First k tried; defaults to max(Δ+1, χ).
    #[arg(long)]
    pub start: Option<usize>,
    /// Witness file with the refuting partition of every k below the answer.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LemmaArg {
    All,
    Codegree,
    MaxdegreeWindow,
    DegreeGap,
    Domination,
    HallConfigs,
    SparseSubsets,
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Tolerance multiplier of the concentration windows.
    #[arg(long, default_value_t = schrom::lemmas::DEFAULT_C)]
    pub c: f64,
    #[arg(long, value_enum, default_value = "all")]
    pub lemma: LemmaArg,
    /// Size of U relative to np in the domination check.
    #[arg(long, default_value_t = schrom::lemmas::DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Constant of the sparse-subsets check.
    #[arg(long, default_value_t = schrom::lemmas::DEFAULT_SPARSE_C)]
    pub big_c: f64,
    /// Also run the planted-clique negative control of the sparse-subsets check.
    #[arg(long)]
    pub negative_control: bool,
    /// CSV report; a JSON summary is written next to it with extension `.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 100)]
    pub hall_retry_budget: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    /// A `.meta.json` file written by an earlier run.
    #[arg(long)]
    pub meta: PathBuf,
}

/// How a command ended.
pub enum CliError {
    /// Exit 1.
    Usage(String),
    /// Exit 2: the object was not found, or provably does not exist.
    Structured(String),
}

impl From<schrom::Error> for CliError {
    fn from(e: schrom::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("I/O error: {e}"))
    }
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&raw) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli, &raw[1..]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Structured(msg)) => {
            eprintln!("failure: {msg}");
            ExitCode::from(2)
        }
    }
}
