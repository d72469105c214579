//! Command-line driver: sweeps, CSV tables, plot data and the validation
//! suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod validate;

use config::{Command, RunConfig};
use error::CliError;
use output::{emit, emit_plot_data, render_csv};

/// Runs one command and writes its output. Failures of the computed physics
/// (unconverged rows, violated identities) are reported after the output has
/// been written.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let out = cfg.out.as_deref();
    match cfg.command {
        Command::Reflection => emit(out, &render_csv(cfg, &commands::reflection(cfg)?)?),
        Command::Smatrix => emit(out, &render_csv(cfg, &commands::smatrix(cfg)?)?),
        Command::Spectrum => emit(out, &render_csv(cfg, &commands::spectrum(cfg)?)?),
        Command::FrictionCurve => {
            let (table, curve) = commands::friction_curve(cfg)?;
            emit(out, &render_csv(cfg, &table)?)?;
            if let Some(path) = cfg.plot.as_deref() {
                emit_plot_data(&curve, path)?;
            }
            let stuck = curve.iter().filter(|p| !p.converged).count();
            if stuck > 0 {
                return Err(CliError::NotConverged(format!(
                    "{stuck} of {} points did not converge",
                    curve.len()
                )));
            }
            Ok(())
        }
        Command::Radiation => {
            let (table, violations) = commands::radiation(cfg)?;
            emit(out, &render_csv(cfg, &table)?)?;
            if violations.is_empty() {
                Ok(())
            } else {
                Err(CliError::Identity(violations.join("; ")))
            }
        }
        Command::Validate => {
            let report = validate::run(cfg)?;
            let mut text = serde_json::to_vec_pretty(&report).expect("report serializes");
            text.push(b'\n');
            emit(out, &text)?;
            let failed: Vec<_> = report.failures().iter().map(|c| c.name.clone()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Identity(format!(
                    "failed checks: {}",
                    failed.join(", ")
                )))
            }
        }
    }
}
