//! Experiment runner for the `akin` solvers.
//!
//! An experiment is a TOML [`ExperimentConfig`] plus a subcommand. Every run writes its
//! artifacts and an `effective_config.toml` into the output directory; feeding that file
//! back with `akin --config` repeats the run byte for byte.
//!
//! Exit status is 0 on success, 2 for usage or configuration errors and 3 for numerical
//! failures. Failures also print a one-line JSON object on stderr.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod seeds;

use std::path::PathBuf;

use akin::{Dimension, Swimmer};
use clap::{Args, Parser, Subcommand};

pub use config::{nondimensionalize, CommandKind, DimensionalParams, ExperimentConfig};
pub use error::{CliError, EXIT_CONFIG, EXIT_NUMERICAL};

use output::Artifacts;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

/// Environment variable that fixes the number of worker threads.
pub const WORKERS_ENV: &str = "AKIN_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "akin",
    version,
    about = "Linear and nonlinear experiments for active rod suspensions"
)]
pub struct Cli {
    /// TOML experiment file. Without a subcommand its `command` key selects the run.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding `output`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Global seed, overriding `seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dispersion roots, the pusher threshold and a trace of γ₂.
    Dispersion(DispersionArgs),
    /// Volterra feedback with its weighted-energy tail and phase-mixing slopes.
    Landau,
    /// One linearized mode trajectory with an exponential fit.
    Mode,
    /// Parallel grid of decay-rate fits.
    Sweep,
    /// Nonlinear run on the periodic box.
    Simulate,
    /// Weighted Poincaré constant and the coefficients derived from it.
    Poincare,
    /// Joins a sweep table with the theory rates.
    Report,
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    /// Spatial dimension.
    #[arg(long, value_parser = parse_dimension)]
    pub d: Option<Dimension>,
    /// `puller` or `pusher`.
    #[arg(long)]
    pub iota: Option<Swimmer>,
    #[arg(long)]
    pub psi_bar: Option<f64>,
}

fn parse_dimension(s: &str) -> Result<Dimension, String> {
    let d: u32 = s.parse().map_err(|e| format!("{e}"))?;
    Dimension::try_from(d).map_err(|e| e.to_string())
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Dispersion(_) => CommandKind::Dispersion,
            Command::Landau => CommandKind::Landau,
            Command::Mode => CommandKind::Mode,
            Command::Sweep => CommandKind::Sweep,
            Command::Simulate => CommandKind::Simulate,
            Command::Poincare => CommandKind::Poincare,
            Command::Report => CommandKind::Report,
        }
    }
}

/// Reads the configuration and applies command-line overrides.
pub fn effective_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
            ExperimentConfig::parse(&text)?
        }
        None if cli.command.is_none() => {
            return Err(CliError::Usage(
                "no subcommand or configuration given".into(),
            ))
        }
        None => ExperimentConfig::default(),
    };
    if let Some(cmd) = &cli.command {
        cfg.command = Some(cmd.kind());
    }
    if cfg.command.is_none() {
        return Err(CliError::Usage("the configuration names no command".into()));
    }
    if let Some(out) = &cli.out {
        cfg.output = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(Command::Dispersion(a)) = &cli.command {
        if let Some(d) = a.d {
            cfg.model.d = d;
        }
        if let Some(s) = a.iota {
            cfg.model.swimmer = Some(s);
        }
        if let Some(p) = a.psi_bar {
            cfg.model.psi_bar = Some(p);
            cfg.model.psi_factor = None;
        }
    }
    Ok(cfg)
}

/// Worker count from [`WORKERS_ENV`], or `None` for one per core.
pub fn workers_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!(
                "{WORKERS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

/// Runs the configured command and returns the paths written.
pub fn execute(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Vec<PathBuf>, CliError> {
    let kind = cfg
        .command
        .ok_or_else(|| CliError::Usage("the configuration names no command".into()))?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    let mut out = Artifacts::create(&cfg.output)?;
    out.write_bytes(commands::EFFECTIVE_CONFIG, cfg.to_toml().as_bytes())?;
    pool.install(|| commands::run(kind, cfg, &mut out))?;
    Ok(out.into_written())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("akin").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_the_model() {
        let cfg = effective_config(&parse(&[
            "dispersion",
            "--d",
            "3",
            "--iota",
            "pusher",
            "--psi-bar",
            "0.5",
        ]))
        .unwrap();
        assert_eq!(cfg.command, Some(CommandKind::Dispersion));
        assert_eq!(cfg.model.d, Dimension::Three);
        assert_eq!(cfg.model.swimmer, Some(Swimmer::Pusher));
        assert_eq!(cfg.model.psi_bar, Some(0.5));
    }

    #[test]
    fn nothing_to_run_is_usage() {
        assert!(matches!(
            effective_config(&parse(&[])),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn bad_dimension_flag() {
        assert!(Cli::try_parse_from(["akin", "dispersion", "--d", "4"]).is_err());
    }
}
