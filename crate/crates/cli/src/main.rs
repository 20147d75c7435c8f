//! `champ` command-line tool.
//!
//! Exit codes: 0 on success, 1 on runtime failure, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod load;

#[derive(Debug, Parser)]
#[command(name = "champ", version, about = "Prune partition ensembles to their domains of optimality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run Louvain over a parameter range and write the ensemble as JSON lines.
    Sweep(SweepArgs),
    /// Write the coefficient table of every unique partition in an ensemble.
    Coeffs(CoeffsArgs),
    /// Compute the admissible partitions and their domains.
    Prune(PruneArgs),
    /// AMI matrix, neighbor and metadata AMI, and per-run scatter data for a domain file.
    Analyze(AnalyzeArgs),
    /// Check a pruned envelope against brute-force argmax evaluation.
    Oracle(OracleArgs),
}

#[derive(Debug, Default, Args)]
struct NetworkArgs {
    /// Single-layer network: `src dst [weight]` edge list, or a `.gml` file.
    #[arg(long, value_name = "PATH", conflicts_with = "multilayer")]
    network: Option<PathBuf>,
    /// Multilayer network: `i_actor i_layer j_actor j_layer weight intra|inter` lines.
    #[arg(long, value_name = "PATH")]
    multilayer: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    gamma_range: Option<Vec<f64>>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    omega_range: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    #[value(name = "1d")]
    OneD,
    #[value(name = "2d")]
    TwoD,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    input: NetworkArgs,
    #[command(flatten)]
    ranges: RangeArgs,
    /// Uniform inclusive grid, gamma-major; without it parameters are sampled uniformly.
    #[arg(long, num_args = 1..=2, value_names = ["N_GAMMA", "N_OMEGA"])]
    grid: Option<Vec<usize>>,
    #[arg(long)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ensemble output (JSON lines).
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CoeffsArgs {
    #[command(flatten)]
    input: NetworkArgs,
    #[arg(long, value_name = "PATH")]
    ensemble: PathBuf,
    /// CSV output; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PruneArgs {
    #[command(flatten)]
    input: NetworkArgs,
    #[arg(long, value_name = "PATH")]
    ensemble: Option<PathBuf>,
    /// Precomputed coefficient CSV, used instead of a network and ensemble.
    #[arg(long, value_name = "PATH", conflicts_with = "ensemble")]
    coeffs: Option<PathBuf>,
    #[command(flatten)]
    ranges: RangeArgs,
    /// Defaults to 2d for multilayer input or when an omega range is given.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Domain JSON output.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    #[arg(long, default_value = "communities", value_name = "KEY")]
    color_key: String,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: NetworkArgs,
    #[arg(long, value_name = "PATH")]
    ensemble: PathBuf,
    /// Domain JSON written by `prune`.
    #[arg(long, value_name = "PATH")]
    domains: PathBuf,
    /// Node labels (`node label`), or `actor [layer] label` for multilayer input.
    #[arg(long, value_name = "PATH")]
    metadata: Option<PathBuf>,
    /// Pairwise AMI matrix CSV of the admissible partitions, in domain order.
    #[arg(long, value_name = "PATH")]
    ami_matrix: Option<PathBuf>,
    /// Domain JSON annotated with neighbor and metadata AMI.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Per-run modularity and community counts CSV.
    #[arg(long, value_name = "PATH")]
    scatter: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    #[arg(long, default_value = "communities", value_name = "KEY")]
    color_key: String,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    input: NetworkArgs,
    /// Ensemble to check; without it every set partition of a small network is enumerated.
    #[arg(long, value_name = "PATH")]
    ensemble: Option<PathBuf>,
    #[arg(long, value_name = "PATH", conflicts_with = "ensemble")]
    coeffs: Option<PathBuf>,
    #[command(flatten)]
    ranges: RangeArgs,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Sample points (1d) or points per axis (2d).
    #[arg(long)]
    samples: Option<usize>,
    /// Points closer than this to a domain border are not compared.
    #[arg(long, default_value_t = 1e-6)]
    border: f64,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<champ::ChampError> for CliError {
    fn from(e: champ::ChampError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub(crate) type CliResult<T> = Result<T, CliError>;

pub(crate) fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

fn init_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("CHAMP_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("CHAMP_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match cli.command {
        Command::Sweep(a) => commands::sweep(a),
        Command::Coeffs(a) => commands::coeffs(a),
        Command::Prune(a) => commands::prune(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Oracle(a) => commands::oracle(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
