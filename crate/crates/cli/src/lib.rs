//! Command-line front end: solves configured problems and writes
//! deterministic reports next to the solution fields.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod config;
pub mod output;

pub use output::{exit, exit_code, ErrorRecord};

#[derive(Debug, Parser)]
#[command(
    name = "sigmak",
    version,
    about = "Solver and audits for sigma_k curvature equations on flat tori"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultFlag {
    FlipNewtonSign,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Randomized check of the sigma_k / Newton-transform identities.
    VerifyIdentities {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        /// Defaults to n for each matrix size.
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultFlag>,
    },
    /// Solve the configured equation and audit the result.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Acknowledges the negative-cone variant.
        #[arg(long)]
        experimental: bool,
    },
    /// Build the right-hand side for a catalog target and emit a solvable config.
    Manufacture {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Schouten invariants of the model spaces.
    Models {
        /// Also write the table as CSV into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A-priori bounds for the configured problem without solving.
    Bounds {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::VerifyIdentities {
            seed,
            trials,
            n_min,
            n_max,
            k_min,
            k_max,
            out,
            inject_fault,
        } => commands::identities::run(&commands::identities::Args {
            seed,
            trials,
            n_min,
            n_max,
            k_min,
            k_max,
            out,
            flip_newton_sign: inject_fault == Some(FaultFlag::FlipNewtonSign),
        }),
        Command::Solve {
            config,
            out,
            seed,
            experimental,
        } => commands::solve::run(&config, out.as_deref(), seed, experimental),
        Command::Manufacture { config, out } => commands::manufacture::run(&config, out.as_deref()),
        Command::Models { out } => commands::models::run(out.as_deref()),
        Command::Bounds { config, out } => commands::bounds::run(&config, out.as_deref()),
    }
}
