//! Command-line front end for the `dtrp` experiments.
//!
//! Every subcommand writes CSV to `--out` (or stdout) and a one-line summary
//! to stderr. Exit codes: 0 success, 2 configuration error, 3 analysis
//! negative (no crossover in the requested range), 1 anything else.

pub mod commands;
pub mod config;
pub mod svg;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use commands::CSV_HEADER;
pub use config::{ExperimentConfig, RawConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Analysis(String),

    #[error("{0}")]
    Io(String),

    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Analysis(_) => 3,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

impl From<dtrp_core::Error> for CliError {
    fn from(e: dtrp_core::Error) -> Self {
        match e {
            dtrp_core::Error::NoCrossover { .. } => CliError::Analysis(e.to_string()),
            dtrp_core::Error::Internal(_) => CliError::Internal(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "dtrp", version, about = "Light-load coverage policies for robot fleets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub raw: RawConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Solve the continuous m-median problem (CSV of points).
    Median,
    /// Monte Carlo estimate of one policy's expected wait.
    Estimate,
    /// Estimates over a list of fleet sizes with a log-log slope fit.
    Sweep,
    /// Fleet size at which a challenger policy overtakes the baseline.
    Crossover,
    /// Every applicable lower and upper bound.
    Bounds,
    /// Differential-drive reachable area against its bounds.
    Reachable,
}

/// Sizes the global worker pool from `DTRP_THREADS`, if set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("DTRP_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Config(format!("DTRP_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Internal(e.to_string()))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = ExperimentConfig::load(cli.raw)?;
    log::debug!("{:?}: {cfg:?}", cli.command);
    match cli.command {
        Command::Median => commands::median(&cfg),
        Command::Estimate => commands::estimate(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Crossover => commands::crossover(&cfg),
        Command::Bounds => commands::bounds(&cfg),
        Command::Reachable => commands::reachable(&cfg),
    }
}
