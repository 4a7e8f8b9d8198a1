//! `tpsketch` command-line driver.
//!
//! Exit codes: 0 on success, 2 for usage and input errors, 1 for internal
//! failures. Set `TPSKETCH_LOG` (e.g. `info`, `debug`) to change log verbosity.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tpsketch::{Metric, Overrides};

#[derive(Debug, Parser)]
#[command(name = "tpsketch", version, about = "Approximate text-to-pattern distance profiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a seeded synthetic input file.
    Gen(GenArgs),
    /// Compute the distance profile of a pattern file against a text file.
    Dist(DistArgs),
    /// Compare estimates with exact profiles on generated inputs.
    Verify(VerifyArgs),
    /// Time the estimator against the exact oracle.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Every byte of the file is one token (0..=255).
    Bytes,
    /// Whitespace-separated decimal integers.
    Ints,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    L2,
    L2sq,
    L1,
    Hamming,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::L2 => Metric::L2,
            MetricArg::L2sq => Metric::L2Sq,
            MetricArg::L1 => Metric::L1,
            MetricArg::Hamming => Metric::Hamming,
        }
    }
}

/// Flags shared by every command that runs the estimator.
#[derive(Debug, Clone, Args)]
pub struct EstimatorArgs {
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    /// Target relative error, in (0, 1).
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    /// Master seed for every random choice of the estimator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Universe size for l1; values must lie in [0, u). Defaults to max(input)+1.
    #[arg(long)]
    pub universe: Option<u64>,
    /// Block dimension override.
    #[arg(long)]
    pub d: Option<usize>,
    /// Constant in the default dimension formula.
    #[arg(long = "constant", short = 'C')]
    pub constant: Option<f64>,
    /// Alignment stride override for l2 (must divide d).
    #[arg(long)]
    pub h: Option<usize>,
    /// Patterns of at most this length are answered exactly.
    #[arg(long)]
    pub m_min: Option<usize>,
}

impl EstimatorArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            constant: self.constant,
            d: self.d,
            h: self.h,
            m_min: self.m_min,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of tokens to write.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Ints)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of distinct symbols: letters from 'a' in bytes mode (at most
    /// 26), integers from 0 in ints mode. Defaults to 4 and 1000.
    #[arg(long)]
    pub alphabet: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub est: EstimatorArgs,
    #[arg(long)]
    pub text: PathBuf,
    #[arg(long)]
    pub pattern: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Ints)]
    pub mode: Mode,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add `exact` and `rel_error` columns computed by the exact oracle.
    #[arg(long)]
    pub emit_exact: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub est: EstimatorArgs,
    /// Number of independent seeds, starting at --seed.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    #[arg(long, default_value_t = 512)]
    pub m: usize,
    /// Alphabet of the generated inputs (see `gen`).
    #[arg(long)]
    pub alphabet: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub est: EstimatorArgs,
    #[arg(long, default_value_t = 1 << 14)]
    pub n: usize,
    #[arg(long, default_value_t = 1 << 11)]
    pub m: usize,
    /// Timed repetitions per method; the median is reported.
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long)]
    pub alphabet: Option<u64>,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TPSKETCH_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(|| match cli.command {
        Command::Gen(a) => commands::run_gen(&a),
        Command::Dist(a) => commands::run_dist(&a),
        Command::Verify(a) => commands::run_verify(&a),
        Command::Bench(a) => commands::run_bench(&a),
    });
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(err)) => {
            eprintln!("error: {err:#}");
            if commands::is_usage(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
        Err(_) => ExitCode::from(1),
    }
}
