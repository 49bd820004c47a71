//! `zdc`: tables, verification, optimisation and comparison for the explicit
//! log-free zero-density constants.
//!
//! Exit codes: 0 success, 1 tolerance failure, 2 domain or precondition
//! error, 3 I/O error.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{FileConfig, FlagConfig};
use output::OutputFormat;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use zdc_core::arith::D3Mode;
use zdc_core::zerocount::ArgumentConstant;

#[derive(Debug, Parser)]
#[command(name = "zdc", version, about = "Explicit log-free zero-density constants for the Riemann zeta function")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Json config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// How d3 is obtained (overrides ZDC_D3_MODE).
    #[arg(long, global = true)]
    d3_mode: Option<D3Mode>,
    /// Constant in the local zero count: corollary (4.7908) or lemma (4.7098).
    #[arg(long, global = true)]
    argument_constant: Option<ArgumentConstant>,
    /// Json schedule file replacing the built-in rows.
    #[arg(long, global = true)]
    schedule: Option<PathBuf>,
    /// Interior points of the log-height grid used for suprema and infima.
    #[arg(long, global = true)]
    grid: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Every constant for one row.
    Constants(RowSelect),
    /// Recompute the appendix tables and diff them against the printed values.
    Table {
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
    },
    /// Certified integral caps and sieve-lemma oracle checks.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        only: VerifyOnly,
        /// Check the integral caps at this alpha0 only (default: 0.985 and 0.9927).
        #[arg(long)]
        alpha0: Option<f64>,
        /// Randomised (U, V, N) cases for the weight oracle.
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Search (u, v, w, x) for one row.
    Optimize {
        #[command(flatten)]
        row: RowSelect,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        /// bound, b or c.
        #[arg(long, default_value = "bound")]
        objective: zdc_core::optimizer::Objective,
        /// Independent chains with consecutive seeds.
        #[arg(long, default_value_t = 1)]
        chains: usize,
        /// Proposal standard deviation as a fraction of each coordinate.
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Start from a random feasible point instead of the row's parameters.
        #[arg(long)]
        random_start: bool,
    },
    /// Compare against the earlier explicit estimate (needs its constants).
    Compare {
        /// CSV with columns sigma,C1,C2.
        #[arg(long, alias = "kln")]
        kln_file: Option<PathBuf>,
    },
    /// Print the schedule in the json schedule-file format.
    Schedule,
}

/// Either a schedule row or an explicit row.
#[derive(Debug, Clone, Args)]
pub struct RowSelect {
    /// Schedule index (0-based; 38 is the uniform row).
    #[arg(long, conflicts_with_all = ["t0", "t1", "alpha0", "u", "v", "w", "x"])]
    pub row: Option<usize>,
    /// Lower height, as `3e12` or `exp(29)`.
    #[arg(long, requires_all = ["t1", "alpha0", "u", "v", "w", "x"])]
    pub t0: Option<String>,
    /// Upper height, as `1e13` or `exp(30)`.
    #[arg(long)]
    pub t1: Option<String>,
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub v: Option<f64>,
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "CB")]
    Cb,
    #[value(name = "b")]
    B,
    Params,
    #[value(name = "d")]
    D,
    #[value(name = "c")]
    C,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyOnly {
    All,
    Integrals,
    Weights,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] zdc_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Tolerance(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    fn exit_code(&self) -> u8 {
        use zdc_core::Error as E;
        match self {
            Self::Tolerance(_) | Self::Core(E::Quadrature(_) | E::Envelope { .. }) => 1,
            Self::Io { .. } | Self::Core(E::Io(_)) => 3,
            Self::Core(_) | Self::Usage(_) => 2,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = FlagConfig {
        format: cli.global.format,
        out: cli.global.out,
        d3_mode: cli.global.d3_mode,
        argument_constant: cli.global.argument_constant,
        schedule: cli.global.schedule,
        grid: cli.global.grid,
    };
    let settings = config::resolve(flags, std::env::var(config::D3_MODE_ENV).ok(), file)?;
    let report = match cli.command {
        Command::Constants(sel) => commands::constants(&settings, &sel)?,
        Command::Table { which } => commands::table(&settings, which)?,
        Command::Verify { only, alpha0, cases, seed } => commands::verify(only, alpha0, cases, seed)?,
        Command::Optimize { row, seed, iters, objective, chains, step, random_start } => {
            let opts = commands::OptimizeOptions { seed, iters, objective, chains, step, random_start };
            commands::optimize(&settings, &row, &opts)?
        }
        Command::Compare { kln_file } => commands::compare(&settings, kln_file.or(settings.kln_file.clone()))?,
        Command::Schedule => commands::schedule(&settings),
    };
    let text = report.render(settings.format);
    match &settings.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e))?,
        None => print!("{text}"),
    }
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Tolerance(format!("outside tolerance: {}", report.failures.join("; "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zdc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
