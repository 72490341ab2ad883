//! `fclt`: command-line front end for random Fourier sum experiments.
//!
//! Exit codes: 0 success, 1 runtime or IO failure, 2 usage or validation error.

mod commands;
mod config;
mod output;
mod summary;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Runtime(_) => 1,
        }
    }
}

impl From<fourier_clt::Error> for CliError {
    fn from(e: fourier_clt::Error) -> Self {
        match e {
            fourier_clt::Error::RetryBudgetExhausted(_) => CliError::Runtime(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fclt", version, about = "Random Fourier sums at random frequencies")]
struct Cli {
    /// Worker threads (0 = one per core). Never changes results.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the value cloud of one realization at m uniform frequencies.
    Simulate(SimulateArgs),
    /// Exact covariance of (Re, Im) at a frequency tuple over an n schedule.
    Covariance(CovarianceArgs),
    /// Run a convergence experiment described by a TOML config.
    Experiment(ExperimentArgs),
    /// Render summary JSON files as text tables and plot-data series.
    Report(ReportArgs),
    /// Reference computations for manual certification.
    #[command(hide = true, subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// rademacher | uniform | gaussian | exponential | student
    #[arg(long)]
    pub model: String,
    /// Degrees of freedom for the student model (must exceed 3).
    #[arg(long)]
    pub dof: Option<f64>,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub seed: u64,
    /// Replicate index selecting the random streams.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Output directory (default: $FCLT_OUT_DIR or ./fclt-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CovarianceArgs {
    /// Comma-separated frequencies in (-1/2, 1/2).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub nus: Vec<f64>,
    /// Comma-separated values of n.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_schedule: Vec<usize>,
    /// Compute degenerate tuples instead of rejecting them.
    #[arg(long)]
    pub non_strict: bool,
    /// Also write a log-log plot-data file of n against the deviation.
    #[arg(long)]
    pub plot: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// One or more summary.json files; several give a side-by-side table.
    #[arg(required = true)]
    pub summaries: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Extended-precision naive Fourier sum.
    Fourier {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        coeffs: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
    },
    /// Monte Carlo estimates of the Gaussian-kernel terms against the target.
    Mmd {
        #[arg(long)]
        h: f64,
        /// A point as `x,y`; repeat the flag for several points.
        #[arg(long, allow_hyphen_values = true)]
        x: Vec<String>,
        #[arg(long, default_value_t = 1_000_000)]
        draws: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Literal rotation-product covariance average.
    Covariance {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        nus: Vec<f64>,
        #[arg(long)]
        n: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Covariance(args) => commands::covariance(args),
        Command::Experiment(args) => commands::experiment(args, cli.workers),
        Command::Report(args) => commands::report(args),
        Command::Oracle(cmd) => commands::oracle(cmd),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
