//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 I/O error.

pub mod commands;
pub mod config;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use config::{EngineSetting, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("numerical: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::ComplexAlpha { .. } | Error::Format(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Analytic,
    Oracle,
    Both,
}

impl From<EngineArg> for EngineSetting {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Analytic => EngineSetting::Analytic,
            EngineArg::Oracle => EngineSetting::Oracle,
            EngineArg::Both => EngineSetting::Both,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rabi-cat", version, about = "Cat states from the quantum Rabi model")]
pub struct Cli {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub engine: Option<EngineArg>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    pub svg: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Pointer-probability data for both figure layouts (fig1.csv, fig2.csv).
    Figures,
    /// Closed-form energies against exact diagonalization (spectrum.csv).
    Spectrum,
    /// Detection statistics along the time grid (evolve.csv).
    Evolve,
    /// One pass through rotation, cavity, inverse rotation and detector.
    Pipeline,
    /// Eigenstate residual norms along the alpha grid (residuals.csv).
    Residuals,
    /// Cutoff convergence of spectral and truncation probes (convergence.csv).
    Convergence,
}

/// Loads the configuration and applies command-line overrides.
pub fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(e) = cli.engine {
        cfg.run.engine = e.into();
    }
    if let Some(s) = cli.seed {
        cfg.run.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output.dir = o.clone();
    } else {
        cfg.output.dir = cfg.resolve(&cfg.output.dir.clone());
    }
    cfg.output.svg |= cli.svg;
    Ok(cfg)
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = effective_config(cli)?;
    let out = cfg.output.dir.clone();
    match cli.command {
        Command::Figures => commands::cmd_figures(&cfg, &out, cfg.output.svg).map(drop),
        Command::Spectrum => commands::cmd_spectrum(&cfg, &out).map(drop),
        Command::Evolve => commands::cmd_evolve(&cfg, &out).map(drop),
        Command::Pipeline => commands::cmd_pipeline(&cfg, &out, cfg.output.svg).map(drop),
        Command::Residuals => commands::cmd_residuals(&cfg, &out).map(drop),
        Command::Convergence => commands::cmd_convergence(&cfg, &out).map(drop),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("rabi-cat: {e}");
            e.exit_code()
        }
    }
}
