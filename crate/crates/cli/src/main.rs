use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qcherenkov::Limit;
use qcherenkov_cli::config::{Command, RunConfig, Settings};
use qcherenkov_cli::error::CliError;

/// Quantum Cherenkov friction between two moving dielectric half-spaces.
#[derive(Debug, Parser)]
#[command(name = "qcherenkov", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON or key=value file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

/// Worker threads come from `QCHERENKOV_THREADS` when it is set.
fn init_threads() -> Result<(), CliError> {
    let Ok(text) = std::env::var("QCHERENKOV_THREADS") else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("QCHERENKOV_THREADS: bad thread count {text:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(e.to_string()))
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let settings = match &cli.config {
        Some(path) => Settings::from_file(path)?.overlay(cli.settings),
        None => cli.settings,
    };
    let cfg = RunConfig::resolve(cli.command, settings)?;
    if cfg.limit == Limit::Retarded {
        if let Some(v) = cfg.velocity {
            if let Some(w) = cfg.material.medium(v, cfg.t2)?.velocity_warning(0.1) {
                eprintln!("warning: {w}");
            }
        }
    }
    qcherenkov_cli::run(&cfg)
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qcherenkov: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
