//! Spectral integration domains shared by the scattering and fluctuational
//! routes.
//!
//! At zero temperature only the superradiant window contributes. It is
//! parametrised as `omega = |kx| (v01 + t (|v| - v01 - v02))`, `t in (0, 1)`,
//! with a cosine map on `t` that smooths the square-root edges. In D = 3 the
//! transverse component runs over `|ky| < K` with `ky = K sin(theta)`, and the
//! `t` range is split where the binding edge switches from one body to the
//! other.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::mode::Mode;
use crate::params::{Dim, System};
use crate::quadrature::{adaptive, cosine_map, Budget, QuadratureConfig, Tolerance, VecEstimate};
use crate::scattering::superradiant_window;

/// Fraction of `rel_tol * int |f|` used as the absolute tolerance.
const ABS_FRACTION: f64 = 1e-2;

/// Runs `pass` twice: a single-rule pilot of `int |f_i|` fixes a scale per
/// component, then the adaptive pass integrates `f_i / scale_i`. The nested
/// absolute tolerances then follow the size of the integral rather than the
/// configured floor, which keeps them above the roundoff of the integrand.
/// A component counts as converged when its error is below
/// `max(rel_tol |I|, abs_tol, 1e-2 rel_tol int |f|)`.
fn normalised<const N: usize, F, P>(q: &QuadratureConfig, pass: P, f: &F) -> (VecEstimate<N>, usize)
where
    F: Fn(&Mode) -> [f64; N],
    P: Fn(Tolerance, &dyn Fn(&Mode) -> [f64; N]) -> (VecEstimate<N>, usize),
{
    let coarse = Tolerance {
        rel: 1.0,
        abs: f64::INFINITY,
    };
    let (pilot, n_pilot) = pass(coarse, &|m: &Mode| f(m).map(f64::abs));
    let scale = pilot
        .value
        .map(|s| if s.is_finite() && s > 0.0 { s } else { 1.0 });
    let tol = Tolerance {
        rel: q.rel_tol,
        abs: ABS_FRACTION * q.rel_tol,
    };
    let (mut est, n) = pass(tol, &|m: &Mode| {
        let mut out = f(m);
        for i in 0..N {
            out[i] /= scale[i];
        }
        out
    });
    let mut ok = est.converged;
    for i in 0..N {
        est.value[i] *= scale[i];
        est.err[i] *= scale[i];
        let bound = (q.rel_tol * est.value[i].abs())
            .max(q.abs_tol)
            .max(ABS_FRACTION * q.rel_tol * scale[i]);
        ok &= est.err[i] <= bound;
    }
    est.converged = ok;
    (est, n + n_pilot)
}

/// Outer `kx` breakpoints (in units of `1/d`) below the cutoff.
fn kx_points(cutoff: f64, d: f64, negative_too: bool) -> Vec<f64> {
    let mut pts = vec![0.0];
    for p in [0.125, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        if p < cutoff {
            pts.push(p);
        }
    }
    pts.push(cutoff);
    let mut pts: Vec<f64> = pts.into_iter().map(|p| p / d).collect();
    if negative_too {
        let mut neg: Vec<f64> = pts.iter().skip(1).rev().map(|p| -p).collect();
        neg.extend(pts);
        pts = neg;
    }
    pts
}

fn measure(dim: Dim) -> f64 {
    match dim {
        Dim::Two => 1.0 / (4.0 * PI * PI),
        Dim::Three => 1.0 / (8.0 * PI * PI * PI),
    }
}

/// `int dk_par domega / (2 pi)^D  f(mode)` over the superradiant window.
/// Returns the estimate and the number of integrand evaluations.
pub fn integrate_window<const N: usize, F>(
    system: &System,
    q: &QuadratureConfig,
    f: F,
) -> (VecEstimate<N>, usize)
where
    F: Fn(&Mode) -> [f64; N],
{
    normalised(q, |tol, g| window_pass(system, q, tol, g), &f)
}

fn window_pass<const N: usize, F>(
    system: &System,
    q: &QuadratureConfig,
    tol: Tolerance,
    f: F,
) -> (VecEstimate<N>, usize)
where
    F: Fn(&Mode) -> [f64; N],
{
    let win = superradiant_window(&system.pair);
    if !win.nonempty {
        return (VecEstimate::zero(), 0);
    }
    let sign = if system.velocity() < 0.0 { -1.0 } else { 1.0 };
    let lo = win.slope_lo;
    let span = win.slope_hi - win.slope_lo;
    let v = system.velocity().abs();
    let v01 = system.pair.body1.v0();
    let v02 = system.pair.body2.v0();
    let dim = system.dim();
    let norm = measure(dim);
    let budget = Budget::new(q.max_evals);
    let kpts = kx_points(q.kx_cutoff, system.gap(), false);
    let k_width = kpts[kpts.len() - 1];
    let t_tol = tol.inner(k_width);

    // Binding edge switches from body 1 to body 2 here.
    let t_split = (v * v01 / (v01 + v02) - lo) / span;

    let est = adaptive(
        |kappa| {
            let kx = sign * kappa;
            let inner = match dim {
                Dim::Two => adaptive(
                    |s| {
                        budget.tick();
                        let (t, dt) = cosine_map(s);
                        let omega = kappa * (lo + t * span);
                        let w = kappa * span * dt * norm;
                        let mut out = f(&Mode::line(omega, kx));
                        out.iter_mut().for_each(|x| *x *= w);
                        (out, [0.0; N])
                    },
                    &[0.0, 1.0],
                    t_tol,
                    &budget,
                ),
                Dim::Three => {
                    let mut total = VecEstimate::zero();
                    for (ta, tb) in [(0.0, t_split), (t_split, 1.0)] {
                        let piece = adaptive(
                            |s| {
                                let (m, dm) = cosine_map(s);
                                let t = ta + (tb - ta) * m;
                                let omega = kappa * (lo + t * span);
                                let reach = (omega / v01).min((v * kappa - omega) / v02);
                                let big_k = (reach * reach - kappa * kappa).max(0.0).sqrt();
                                let jac = kappa * span * (tb - ta) * dm * norm;
                                let theta_tol = t_tol.inner(1.0);
                                let e = adaptive(
                                    |th| {
                                        budget.tick();
                                        let (sn, cs) = th.sin_cos();
                                        let w = 2.0 * big_k * cs * jac;
                                        let mut out = f(&Mode::plane(omega, kx, big_k * sn));
                                        out.iter_mut().for_each(|x| *x *= w);
                                        (out, [0.0; N])
                                    },
                                    &[0.0, FRAC_PI_2],
                                    theta_tol,
                                    &budget,
                                );
                                (e.value, e.err)
                            },
                            &[0.0, 1.0],
                            t_tol,
                            &budget,
                        );
                        total.add(&piece);
                    }
                    total
                }
            };
            (inner.value, inner.err)
        },
        &kpts,
        tol,
        &budget,
    );
    let mut est = est;
    est.converged &= !budget.exhausted();
    (est, budget.used())
}

/// Frequency intervals at fixed `kx` where both bodies propagate, capped at
/// `omega_cap`. Returned pieces never straddle a point where the binding
/// transverse edge changes body.
pub fn propagating_intervals(system: &System, kx: f64, omega_cap: f64) -> Vec<(f64, f64)> {
    let v = system.velocity();
    let v01 = system.pair.body1.v0();
    let v02 = system.pair.body2.v0();
    let a = kx.abs();
    let lo = v01 * a;
    let (band_lo, band_hi) = (v * kx - v02 * a, v * kx + v02 * a);
    let mut pieces = Vec::new();
    if band_lo > lo {
        pieces.push((lo, band_lo.min(omega_cap)));
    }
    let start = lo.max(band_hi);
    if omega_cap > start {
        pieces.push((start, omega_cap));
    }
    let mut kinks = vec![v01 * v * kx / (v01 + v02)];
    if v01 != v02 {
        kinks.push(v01 * v * kx / (v01 - v02));
    }
    let mut out = Vec::new();
    for (p, q) in pieces {
        if q <= p {
            continue;
        }
        let mut cuts = vec![p];
        let mut inside: Vec<f64> = kinks.iter().copied().filter(|k| *k > p && *k < q).collect();
        inside.sort_by(f64::total_cmp);
        cuts.extend(inside);
        cuts.push(q);
        out.extend(cuts.windows(2).map(|w| (w[0], w[1])));
    }
    out
}

/// `int dk_par domega / (2 pi)^D f(mode)` over all `omega > 0` and `k_par`
/// where both bodies propagate, for `omega` below `omega_edge(kx) + tail`.
pub fn integrate_propagating<const N: usize, F>(
    system: &System,
    q: &QuadratureConfig,
    tail: f64,
    f: F,
) -> (VecEstimate<N>, usize)
where
    F: Fn(&Mode) -> [f64; N],
{
    normalised(q, |tol, g| propagating_pass(system, q, tail, tol, g), &f)
}

fn propagating_pass<const N: usize, F>(
    system: &System,
    q: &QuadratureConfig,
    tail: f64,
    tol: Tolerance,
    f: F,
) -> (VecEstimate<N>, usize)
where
    F: Fn(&Mode) -> [f64; N],
{
    let v = system.velocity();
    let v01 = system.pair.body1.v0();
    let v02 = system.pair.body2.v0();
    let dim = system.dim();
    let norm = measure(dim);
    let budget = Budget::new(q.max_evals);
    let kpts = kx_points(q.kx_cutoff, system.gap(), true);
    let k_width = kpts[kpts.len() - 1] - kpts[0];
    let w_tol = tol.inner(k_width);

    let est = adaptive(
        |kx| {
            let cap = (v01 * kx.abs()).max(v * kx + v02 * kx.abs()) + tail;
            let mut total = VecEstimate::zero();
            for (wa, wb) in propagating_intervals(system, kx, cap) {
                let piece = adaptive(
                    |s| {
                        let (m, dm) = cosine_map(s);
                        let omega = wa + (wb - wa) * m;
                        let jac = (wb - wa) * dm * norm;
                        match dim {
                            Dim::Two => {
                                budget.tick();
                                let mut out = f(&Mode::line(omega, kx));
                                out.iter_mut().for_each(|x| *x *= jac);
                                (out, [0.0; N])
                            }
                            Dim::Three => {
                                let reach = (omega / v01).min((omega - v * kx).abs() / v02);
                                let big_k = (reach * reach - kx * kx).max(0.0).sqrt();
                                let e = adaptive(
                                    |th| {
                                        budget.tick();
                                        let (sn, cs) = th.sin_cos();
                                        let w = 2.0 * big_k * cs * jac;
                                        let mut out = f(&Mode::plane(omega, kx, big_k * sn));
                                        out.iter_mut().for_each(|x| *x *= w);
                                        (out, [0.0; N])
                                    },
                                    &[0.0, FRAC_PI_2],
                                    w_tol.inner(1.0),
                                    &budget,
                                );
                                (e.value, e.err)
                            }
                        }
                    },
                    &[0.0, 1.0],
                    w_tol,
                    &budget,
                );
                total.add(&piece);
            }
            (total.value, total.err)
        },
        &kpts,
        tol,
        &budget,
    );
    let mut est = est;
    est.converged &= !budget.exhausted();
    (est, budget.used())
}
