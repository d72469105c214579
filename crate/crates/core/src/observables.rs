//! Integrated observables of the scattering route: the friction force, the
//! radiated power and their dependence on the sliding velocity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::integrate_window;
use crate::error::{Error, Result};
use crate::params::{HalfSpacePair, Limit, MediumSpec, System};
use crate::quadrature::{QuadratureConfig, QuadratureEstimate};
use crate::scattering::{reflection_pair, smatrix_solve, tunneling_weight};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrictionResult {
    pub v_over_v0: f64,
    pub dim: usize,
    /// `f d^(D+1) / v0`.
    pub g: f64,
    pub g_err: f64,
    /// Radiated power in units of `v0^2 / d^(D+1)`.
    pub p_rad: f64,
    pub n_evals: usize,
    pub converged: bool,
}

impl FrictionResult {
    pub fn estimate(&self) -> QuadratureEstimate {
        QuadratureEstimate {
            value: self.g,
            err_estimate: self.g_err,
            n_evals: self.n_evals,
            converged: self.converged,
        }
    }
}

/// `|S21|^2` of a window mode from the closed form. Inside the window the
/// signed weight is never positive.
fn window_transmission(mode: &crate::mode::Mode, system: &System) -> f64 {
    let Ok((r1, r2, w)) = reflection_pair(mode, system) else {
        return 0.0;
    };
    let tw = tunneling_weight(r1.value, r2.value, w.k_perp_gap.im, system.gap());
    assert!(
        tw <= 0.0,
        "negative transmission sample {} at omega = {}, k = {:?}",
        -tw,
        mode.omega,
        mode.k
    );
    -tw
}

fn require_zero_temperature(system: &System) -> Result<()> {
    if system.pair.body1.temperature() != 0.0 || system.pair.body2.temperature() != 0.0 {
        return Err(Error::invalid(
            "the scattering route is stated at zero temperature",
        ));
    }
    Ok(())
}

/// Friction force without the convergence check.
pub fn friction_estimate(system: &System, q: &QuadratureConfig) -> Result<FrictionResult> {
    require_zero_temperature(system)?;
    let v0 = system.pair.body1.v0();
    let d = system.gap();
    let dim = system.dim().value() as i32;
    let (est, n) = integrate_window(system, q, |m| {
        let t = window_transmission(m, system);
        [m.kx().abs() * t, m.omega * t]
    });
    let scale = d.powi(dim + 1) / v0;
    Ok(FrictionResult {
        v_over_v0: system.velocity() / v0,
        dim: dim as usize,
        g: est.value[0] * scale,
        g_err: est.err[0] * scale,
        p_rad: est.value[1] * scale / v0,
        n_evals: n,
        converged: est.converged,
    })
}

/// Dimensionless friction `g = f d^(D+1) / v0`. Exactly zero below threshold.
pub fn friction(system: &System, q: &QuadratureConfig) -> Result<FrictionResult> {
    let r = friction_estimate(system, q)?;
    if !r.converged {
        return Err(Error::NotConverged {
            estimate: r.estimate(),
        });
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiatedPower {
    /// `int omega |S21|^2` from the closed form.
    pub closed_form: QuadratureEstimate,
    /// `int omega (|S11|^2 - 1)` from the matching system.
    pub reflection_loss: QuadratureEstimate,
}

/// Power carried off by the superradiant pairs, in physical units.
pub fn radiated_power(system: &System, q: &QuadratureConfig) -> Result<RadiatedPower> {
    require_zero_temperature(system)?;
    let (est, n) = integrate_window(system, q, |m| {
        let t = window_transmission(m, system);
        let loss = smatrix_solve(m, system)
            .map(|s| s.s11.norm_sqr() - 1.0)
            .unwrap_or(t);
        [m.omega * t, m.omega * loss]
    });
    let r = RadiatedPower {
        closed_form: est.component(0, n),
        reflection_loss: est.component(1, n),
    };
    if !est.converged {
        return Err(Error::NotConverged {
            estimate: r.closed_form,
        });
    }
    Ok(r)
}

/// System with body 2 sliding at `v_over_v0` times the wave speed of body 1.
pub fn at_velocity(system: &System, v_over_v0: f64) -> System {
    let v0 = system.pair.body1.v0();
    let body2 = system
        .pair
        .body2
        .with_velocity(system.pair.body1.velocity() + v_over_v0 * v0);
    System {
        pair: HalfSpacePair::new(system.pair.body1, body2),
        ..*system
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveDiagnostics {
    /// First grid index with `g > 0`.
    pub threshold_index: Option<usize>,
    pub peak_index: Option<usize>,
    /// Sign changes of the discrete slope, zero slopes skipped.
    pub slope_sign_changes: usize,
    /// One rise followed by one fall.
    pub unimodal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GCurve {
    pub points: Vec<FrictionResult>,
    pub diagnostics: CurveDiagnostics,
}

pub fn diagnose(xs: &[f64], gs: &[f64]) -> CurveDiagnostics {
    debug_assert_eq!(xs.len(), gs.len());
    let threshold_index = gs.iter().position(|g| *g > 0.0);
    let peak_index = gs
        .iter()
        .enumerate()
        .filter(|(_, g)| **g > 0.0)
        .fold(None::<(usize, f64)>, |best, (i, g)| match best {
            Some((_, b)) if b >= *g => best,
            _ => Some((i, *g)),
        })
        .map(|(i, _)| i);
    let signs: Vec<f64> = gs
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|s| *s != 0.0)
        .map(f64::signum)
        .collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let unimodal = changes == 1 && signs.first() == Some(&1.0);
    CurveDiagnostics {
        threshold_index,
        peak_index,
        slope_sign_changes: changes,
        unimodal,
    }
}

/// `g` on a grid of `v / v0`, evaluated in parallel. Points that fail to
/// converge are kept and flagged.
pub fn g_curve(system: &System, grid: &[f64], q: &QuadratureConfig) -> Result<GCurve> {
    require_zero_temperature(system)?;
    let points: Vec<FrictionResult> = grid
        .par_iter()
        .map(|&x| friction_estimate(&at_velocity(system, x), q))
        .collect::<Result<_>>()?;
    let gs: Vec<f64> = points.iter().map(|p| p.g).collect();
    let diagnostics = diagnose(grid, &gs);
    Ok(GCurve {
        points,
        diagnostics,
    })
}

/// Least-squares line through the threshold, `g = slope (x - x_th)`, and an
/// unconstrained affine fit for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFit {
    pub threshold: f64,
    pub slope: f64,
    pub max_residual: f64,
    pub rms_residual: f64,
    pub segment_max: f64,
    pub affine_slope: f64,
    pub affine_intercept: f64,
    pub affine_max_residual: f64,
    /// Exponent `a` of a power-law fit `g ~ (x - x_th)^a`.
    pub power_exponent: f64,
}

impl ThresholdFit {
    pub fn relative_residual(&self) -> f64 {
        self.max_residual / self.segment_max
    }
}

pub fn threshold_fit(xs: &[f64], gs: &[f64], threshold: f64) -> ThresholdFit {
    let n = xs.len() as f64;
    let dx: Vec<f64> = xs.iter().map(|x| x - threshold).collect();
    let slope =
        dx.iter().zip(gs).map(|(a, g)| a * g).sum::<f64>() / dx.iter().map(|a| a * a).sum::<f64>();
    let res: Vec<f64> = dx.iter().zip(gs).map(|(a, g)| g - slope * a).collect();
    let max_residual = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let rms_residual = (res.iter().map(|r| r * r).sum::<f64>() / n).sqrt();
    let segment_max = gs.iter().fold(0.0f64, |m, g| m.max(*g));

    let mx = xs.iter().sum::<f64>() / n;
    let mg = gs.iter().sum::<f64>() / n;
    let sxx = xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    let sxg = xs
        .iter()
        .zip(gs)
        .map(|(x, g)| (x - mx) * (g - mg))
        .sum::<f64>();
    let affine_slope = sxg / sxx;
    let affine_intercept = mg - affine_slope * mx;
    let affine_max_residual = xs.iter().zip(gs).fold(0.0f64, |m, (x, g)| {
        m.max((g - affine_intercept - affine_slope * x).abs())
    });

    let logs: Vec<(f64, f64)> = dx
        .iter()
        .zip(gs)
        .filter(|(a, g)| **a > 0.0 && **g > 0.0)
        .map(|(a, g)| (a.ln(), g.ln()))
        .collect();
    let m = logs.len() as f64;
    let lx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let ly = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let power_exponent = logs.iter().map(|p| (p.0 - lx) * (p.1 - ly)).sum::<f64>()
        / logs.iter().map(|p| (p.0 - lx) * (p.0 - lx)).sum::<f64>();

    ThresholdFit {
        threshold,
        slope,
        max_residual,
        rms_residual,
        segment_max,
        affine_slope,
        affine_intercept,
        affine_max_residual,
        power_exponent,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetardationConvergence {
    pub v_over_v0: f64,
    /// Nonretarded value.
    pub reference: f64,
    pub c_over_v0: Vec<f64>,
    pub values: Vec<f64>,
    /// `|g(c) - g(inf)| / g(inf)`.
    pub deviations: Vec<f64>,
    /// Deviations shrink strictly as `c / v0` grows.
    pub monotone: bool,
}

/// Friction with a finite light speed in the gap, for identical bodies.
pub fn retardation_convergence(
    system: &System,
    q: &QuadratureConfig,
    c_over_v0: &[f64],
) -> Result<RetardationConvergence> {
    if !system.pair.same_material() {
        return Err(Error::invalid("retardation scan expects identical bodies"));
    }
    let v0 = system.pair.body1.v0();
    let ratio = system.velocity() / v0;
    let reference_system = System {
        limit: Limit::NonRetarded,
        ..*system
    };
    let reference = friction(&reference_system, q)?.g;
    let values = c_over_v0
        .par_iter()
        .map(|&c| {
            if !(c > ratio) {
                return Err(Error::invalid(format!(
                    "c/v0 = {c} must exceed v/v0 = {ratio}"
                )));
            }
            let eps = c * c;
            let body1 = MediumSpec::new(eps, 0.0, 0.0)?;
            let body2 = MediumSpec::new(eps, ratio / c, 0.0)?;
            let s = System::new(
                HalfSpacePair::new(body1, body2),
                system.geometry,
                Limit::Retarded,
            )?;
            friction(&s, q).map(|r| r.g)
        })
        .collect::<Result<Vec<f64>>>()?;
    let deviations: Vec<f64> = values
        .iter()
        .map(|g| (g - reference).abs() / reference.abs())
        .collect();
    let mut order: Vec<usize> = (0..c_over_v0.len()).collect();
    order.sort_by(|a, b| c_over_v0[*a].total_cmp(&c_over_v0[*b]));
    let monotone = order
        .windows(2)
        .all(|w| deviations[w[1]] < deviations[w[0]]);
    Ok(RetardationConvergence {
        v_over_v0: ratio,
        reference,
        c_over_v0: c_over_v0.to_vec(),
        values,
        deviations,
        monotone,
    })
}
