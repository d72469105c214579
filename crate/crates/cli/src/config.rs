//! Run configuration: command-line flags layered over an optional file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use qcherenkov::{Dim, Geometry, HalfSpacePair, Limit, MediumSpec, QuadratureConfig, System};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Reflection,
    Smatrix,
    FrictionCurve,
    Radiation,
    Spectrum,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Reflection => "reflection",
            Command::Smatrix => "smatrix",
            Command::FrictionCurve => "friction-curve",
            Command::Radiation => "radiation",
            Command::Spectrum => "spectrum",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// `start:stop:count` over `v / v0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, count: usize, spacing: Spacing) -> Result<Self, CliError> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err(CliError::config("grid bounds must be finite"));
        }
        if count == 0 {
            return Err(CliError::config("grid count must be at least 1"));
        }
        if spacing == Spacing::Log && !(start > 0.0 && stop > 0.0) {
            return Err(CliError::config("log spacing needs positive grid bounds"));
        }
        Ok(Self {
            start,
            stop,
            count,
            spacing,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        let lerp = |a: f64, b: f64, i: usize| (a * (n - i as f64) + b * i as f64) / n;
        (0..self.count)
            .map(|i| match self.spacing {
                Spacing::Linear => lerp(self.start, self.stop, i),
                Spacing::Log => lerp(self.start.ln(), self.stop.ln(), i).exp(),
            })
            .collect()
    }
}

/// The `start:stop:count` part of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange(pub f64, pub f64, pub usize);

impl FromStr for GridRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got `{s}`"));
        };
        let a = a.trim().parse().map_err(|e| format!("grid start: {e}"))?;
        let b = b.trim().parse().map_err(|e| format!("grid stop: {e}"))?;
        let n = n.trim().parse().map_err(|e| format!("grid count: {e}"))?;
        Ok(GridRange(a, b, n))
    }
}

impl fmt::Display for GridRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.0, self.1, self.2)
    }
}

/// Every setting is optional here; flags override the config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// Relative permittivity of both bodies.
    #[arg(long, conflicts_with = "v0")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// In-medium wave speed in units of c (instead of --eps).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
    /// Velocity of body 2 in units of c.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    /// Temperature of body 1.
    #[arg(long = "T1")]
    #[serde(rename = "T1", skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    /// Temperature of body 2.
    #[arg(long = "T2")]
    #[serde(rename = "T2", skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
    /// Gap width.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    /// Spatial dimension, 2 or 3.
    #[arg(long = "D")]
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Keep a finite light speed in the gap.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retarded: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    /// Cutoff of |kx| in units of 1/d.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kx_cutoff: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_evals: Option<usize>,
    /// Sweep over v/v0 as start:stop:count.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing: Option<Spacing>,
    /// Lab-frame frequency for reflection and smatrix.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kx: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ky: Option<f64>,
    /// Seed for the random modes of validate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Random modes per check in validate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Plot-ready two-column file for friction-curve.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        Settings { $($field: $top.$field.or($base.$field)),* }
    };
}

impl Settings {
    /// `top` wins wherever it is set. A material given in `top` as either
    /// `eps` or `v0` replaces both.
    pub fn overlay(self, top: Settings) -> Settings {
        let material = (top.eps, top.v0);
        let mut s = overlay!(
            self, top, eps, v0, v, t1, t2, d, dim, retarded, rel_tol, abs_tol, kx_cutoff,
            max_evals, grid, spacing, omega, kx, ky, seed, samples, out, plot
        );
        if material != (None, None) {
            (s.eps, s.v0) = material;
        }
        s
    }

    /// Reads a JSON object or `key = value` lines (`#` starts a comment).
    pub fn from_file(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Settings, String> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| e.to_string());
        }
        let mut map = Map::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("line {}: expected key = value", i + 1));
            };
            let key = key.trim().replace('_', "-");
            map.insert(key, scalar(value.trim()));
        }
        serde_json::from_value(Value::Object(map)).map_err(|e| e.to_string())
    }
}

fn scalar(s: &str) -> Value {
    if let Ok(n) = s.parse::<u64>() {
        return Value::from(n);
    }
    if let Ok(x) = s.parse::<f64>() {
        if let Some(n) = serde_json::Number::from_f64(x) {
            return Value::Number(n);
        }
    }
    match s {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => Value::String(s.trim_matches('"').to_string()),
    }
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub material: Material,
    pub epsilon: f64,
    pub v0: f64,
    pub velocity: Option<f64>,
    pub t1: f64,
    pub t2: f64,
    pub gap: f64,
    pub dim: Dim,
    pub limit: Limit,
    pub quadrature: QuadratureConfig,
    pub grid: Option<GridSpec>,
    pub omega: Option<f64>,
    pub kx: Option<f64>,
    pub ky: Option<f64>,
    pub seed: u64,
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 1000;

impl RunConfig {
    pub fn resolve(command: Command, s: Settings) -> Result<RunConfig, CliError> {
        let (epsilon, v0) = match (s.eps, s.v0) {
            (Some(_), Some(_)) => return Err(CliError::config("give either eps or v0, not both")),
            (Some(eps), None) => (eps, 1.0 / eps.sqrt()),
            (None, Some(v0)) => (1.0 / (v0 * v0), v0),
            (None, None) => (1.0, 1.0),
        };
        let material = match s.v0 {
            Some(v0) => Material::V0(v0),
            None => Material::Epsilon(epsilon),
        };
        material.medium(0.0, 0.0)?;

        let dim = Dim::from_usize(s.dim.unwrap_or(2)).map_err(CliError::from)?;
        let gap = s.d.unwrap_or(1.0);
        Geometry::new(gap, dim).map_err(CliError::from)?;

        let defaults = QuadratureConfig::default();
        let quadrature = QuadratureConfig {
            rel_tol: s.rel_tol.unwrap_or(defaults.rel_tol),
            abs_tol: s.abs_tol.unwrap_or(defaults.abs_tol),
            kx_cutoff: s.kx_cutoff.unwrap_or(defaults.kx_cutoff),
            max_evals: s.max_evals.unwrap_or(defaults.max_evals),
        };
        if !(quadrature.rel_tol > 0.0 && quadrature.abs_tol >= 0.0 && quadrature.kx_cutoff > 0.0) {
            return Err(CliError::config(
                "tolerances and the kx cutoff must be positive",
            ));
        }

        let grid = match &s.grid {
            Some(g) => {
                let GridRange(a, b, n) = g.parse().map_err(CliError::Config)?;
                Some(GridSpec::new(a, b, n, s.spacing.unwrap_or_default())?)
            }
            None => None,
        };
        let samples = s.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(CliError::config("samples must be at least 1"));
        }
        let cfg = RunConfig {
            command,
            material,
            epsilon,
            v0,
            velocity: s.v,
            t1: s.t1.unwrap_or(0.0),
            t2: s.t2.unwrap_or(0.0),
            gap,
            dim,
            limit: if s.retarded.unwrap_or(false) {
                Limit::Retarded
            } else {
                Limit::NonRetarded
            },
            quadrature,
            grid,
            omega: s.omega,
            kx: s.kx,
            ky: s.ky,
            seed: s.seed.unwrap_or(DEFAULT_SEED),
            samples,
            out: s.out,
            plot: s.plot,
        };
        if let Some(v) = cfg.velocity {
            cfg.system(v)?;
        }
        Ok(cfg)
    }

    /// System with body 2 at velocity `v` (units of c).
    pub fn system(&self, v: f64) -> Result<System, CliError> {
        let body1 = self.material.medium(0.0, self.t1)?;
        let body2 = self.material.medium(v, self.t2)?;
        let geometry = Geometry::new(self.gap, self.dim)?;
        Ok(System::new(
            HalfSpacePair::new(body1, body2),
            geometry,
            self.limit,
        )?)
    }

    /// The `v / v0` values to evaluate: the grid, or the single `--v`.
    pub fn ratios(&self) -> Result<Vec<f64>, CliError> {
        match (self.grid, self.velocity) {
            (Some(g), _) => Ok(g.points()),
            (None, Some(v)) => Ok(vec![v / self.v0]),
            (None, None) => Err(CliError::config(format!(
                "{} needs --grid or --v",
                self.command.name()
            ))),
        }
    }

    pub fn require_velocity(&self) -> Result<f64, CliError> {
        self.velocity
            .ok_or_else(|| CliError::config(format!("{} needs --v", self.command.name())))
    }

    /// Settings that reproduce this run, output paths excluded.
    pub fn echo(&self) -> Settings {
        Settings {
            eps: match self.material {
                Material::Epsilon(e) => Some(e),
                Material::V0(_) => None,
            },
            v0: match self.material {
                Material::V0(v0) => Some(v0),
                Material::Epsilon(_) => None,
            },
            v: self.velocity,
            t1: Some(self.t1),
            t2: Some(self.t2),
            d: Some(self.gap),
            dim: Some(self.dim.value()),
            retarded: Some(self.limit == Limit::Retarded),
            rel_tol: Some(self.quadrature.rel_tol),
            abs_tol: Some(self.quadrature.abs_tol),
            kx_cutoff: Some(self.quadrature.kx_cutoff),
            max_evals: Some(self.quadrature.max_evals),
            grid: self
                .grid
                .map(|g| GridRange(g.start, g.stop, g.count).to_string()),
            spacing: self.grid.map(|g| g.spacing),
            omega: self.omega,
            kx: self.kx,
            ky: self.ky,
            seed: Some(self.seed),
            samples: Some(self.samples),
            ..Settings::default()
        }
    }
}

/// The material as it was specified, so that echoes reproduce it exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Material {
    Epsilon(f64),
    V0(f64),
}

impl Material {
    pub fn medium(self, velocity: f64, temperature: f64) -> Result<MediumSpec, CliError> {
        let m = match self {
            Material::Epsilon(eps) => MediumSpec::new(eps, velocity, temperature),
            Material::V0(v0) => MediumSpec::from_v0(v0, velocity, temperature),
        };
        Ok(m?)
    }
}
