//! Command-line front end for `nehari-core`: run configuration, worker-pool
//! orchestration of parameter cells, and CSV/JSON/gnuplot output.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

pub use commands::Status;
pub use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "nehari", version, about = "Nehari-manifold and Rayleigh-quotient computations for the fractional Phi-Laplacian")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Run configuration (TOML, or JSON by extension or content).
    pub config: PathBuf,
    /// Worker threads; overrides `threads` in the config.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory; overrides `out_dir` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// RNG seed; overrides `seed` in the config.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the growth-law, exponent and potential hypotheses.
    Check(Common),
    /// Tabulate the fibering quotients along one ray.
    Fibering {
        #[command(flatten)]
        common: Common,
        /// Use the calibrated closed-form toy ray instead of the config problem.
        #[arg(long)]
        toy: bool,
    },
    /// Estimate the extremal parameters for every configured lambda.
    Extremal(Common),
    /// Solve both branches at every (lambda, mu) cell.
    Solve(Common),
    /// Solve a parameter sweep and check its asymptotic trends.
    Sweep(Common),
    /// Certify nonexistence below the Nehari extremal value.
    Nonexist(Common),
}

impl Common {
    /// Loads the config and applies command-line overrides, so the manifest
    /// echoes exactly what ran.
    pub fn load(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::from_path(&self.config)?;
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        if let Some(o) = &self.out {
            cfg.out_dir = o.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Check(c) => commands::check(&c.load()?),
        Command::Fibering { common, toy } => commands::fibering(&common.load()?, *toy),
        Command::Extremal(c) => commands::extremal_cmd(&c.load()?),
        Command::Solve(c) => commands::solve(&c.load()?),
        Command::Sweep(c) => commands::sweep(&c.load()?),
        Command::Nonexist(c) => commands::nonexist(&c.load()?),
    }
}
