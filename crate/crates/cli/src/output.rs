//! CSV tables with `#` metadata, and plot-ready friction curves.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use qcherenkov::observables::diagnose;
use qcherenkov::FrictionResult;

use crate::config::RunConfig;
use crate::error::CliError;

/// Shortest round-trip text of a float, scientific outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// A table ready to be written as CSV.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Comment lines written after the rows.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Metadata lines that identify the program and reproduce the run.
pub fn preamble(cfg: &RunConfig) -> Vec<String> {
    let echo = serde_json::to_string(&cfg.echo()).expect("settings serialize");
    vec![
        format!(
            "qcherenkov {} {}",
            env!("CARGO_PKG_VERSION"),
            cfg.command.name()
        ),
        format!("config: {echo}"),
    ]
}

pub fn render_csv(cfg: &RunConfig, table: &Table) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    for line in preamble(cfg) {
        writeln!(buf, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    let mut buf = w.into_inner().map_err(|e| e.into_error())?;
    for note in &table.notes {
        writeln!(buf, "# {note}")?;
    }
    Ok(buf)
}

/// Writes to `path`, or to standard output when it is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            f.write_all(bytes)?;
            f.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Sidecar path next to a plot file: `curve.dat` becomes `curve.annotations.txt`.
pub fn annotation_path(path: &Path) -> PathBuf {
    path.with_extension("annotations.txt")
}

/// Two-column `v_over_v0 g` file plus an annotation sidecar marking the
/// threshold, the maximum and the rows below threshold.
pub fn emit_plot_data(curve: &[FrictionResult], path: &Path) -> Result<PathBuf, CliError> {
    if curve.is_empty() {
        return Err(CliError::config("cannot plot an empty curve"));
    }
    let xs: Vec<f64> = curve.iter().map(|p| p.v_over_v0).collect();
    let gs: Vec<f64> = curve.iter().map(|p| p.g).collect();

    let mut data = String::from("# v_over_v0 g\n");
    for (x, g) in xs.iter().zip(&gs) {
        data.push_str(&format!("{} {}\n", num(*x), num(*g)));
    }
    std::fs::write(path, data)?;

    let diag = diagnose(&xs, &gs);
    let mut notes = Vec::new();
    match diag.threshold_index {
        Some(0) => notes.push(format!(
            "threshold: below the first grid point v_over_v0 = {}",
            num(xs[0])
        )),
        Some(i) => notes.push(format!(
            "threshold: v_over_v0 = {} +/- {} (last g = 0 at row {}, first g > 0 at row {})",
            num(xs[i - 1]),
            num((xs[i] - xs[i - 1]).abs()),
            i - 1,
            i
        )),
        None => notes.push("threshold: not reached on this grid".to_string()),
    }
    match diag.peak_index {
        Some(i) => notes.push(format!(
            "maximum: v_over_v0 = {} at row {i}, g = {}, slope sign changes: {}{}{}",
            num(xs[i]),
            num(gs[i]),
            diag.slope_sign_changes,
            if diag.unimodal { " (unimodal)" } else { "" },
            if i + 1 == xs.len() {
                " (last grid point, the peak may lie beyond)"
            } else {
                ""
            }
        )),
        None => notes.push("maximum: none".to_string()),
    }
    for (i, (x, g)) in xs.iter().zip(&gs).enumerate() {
        if *g == 0.0 {
            notes.push(format!("row {i} v_over_v0 = {}: below threshold", num(*x)));
        }
    }
    let side = annotation_path(path);
    std::fs::write(&side, notes.join("\n") + "\n")?;
    Ok(side)
}
