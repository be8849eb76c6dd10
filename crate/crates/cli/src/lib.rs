//! The `ordo` experiment runner.

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;

use clap::{Parser, Subcommand};

use config::{CommonArgs, RunConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "ordo", version, about = "Quantization rules, short-time actions and time-sliced propagators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal-ordered quantization of a polynomial symbol
    Quantize {
        #[command(flatten)]
        common: CommonArgs,
        /// Print JSON instead of the canonical text form
        #[arg(long)]
        json: bool,
    },
    /// Kernel matrix of a symbol on the grid (binary and CSV)
    Kernel {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Numeric action sweep against the short-time series, with a coefficient fit
    Action {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Secular profiles and the closed-form series coefficients
    Series {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Trotter convergence and fixed-dq phase scaling of the slice schemes
    Slice {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Chernoff iteration of the quantized short-time propagator
    Chernoff {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Discrepancy report from run artifacts
    Report {
        #[command(flatten)]
        common: CommonArgs,
        /// Produce the action, slice and chernoff artifacts first
        #[arg(long)]
        run_all: bool,
    },
}

/// Caps rayon's global pool from `ORDO_THREADS`; a no-op if the pool already exists.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("ORDO_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Config(format!("ORDO_THREADS must be a positive integer, got '{v}'")))?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(cli: &Cli, w: &mut impl Write) -> Result<(), CliError> {
    init_threads()?;
    match &cli.command {
        Command::Quantize { common, json } => commands::quantize(&RunConfig::resolve(common)?, common.grid.is_some(), *json, w),
        Command::Kernel { common } => commands::kernel(&RunConfig::resolve(common)?, w),
        Command::Action { common } => commands::action(&RunConfig::resolve(common)?, w),
        Command::Series { common } => commands::series(&RunConfig::resolve(common)?, w),
        Command::Slice { common } => commands::slice(&RunConfig::resolve(common)?, w),
        Command::Chernoff { common } => commands::chernoff(&RunConfig::resolve(common)?, w),
        Command::Report { common, run_all } => commands::report(&RunConfig::resolve(common)?, *run_all, w),
    }
}
