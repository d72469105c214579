//! Reflection from a single half-space and the two-body tunneling problem.
//!
//! The moving body is described in its own rest frame at the shifted
//! frequency `omega' = omega - v kx`. Inside the superradiant window this
//! frequency is negative and the transmitted wave that carries energy away
//! from the interface is the negative-frequency one, which turns ordinary
//! unitarity into `1 - |S11|^2 = sgn(omega') |S21|^2`.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::branch::{gap_arg, medium_arg, retarded_sqrt, wavenumbers, WaveNumbers};
use crate::error::{Error, Result};
use crate::mode::{Frame, Mode};
use crate::params::{HalfSpacePair, Limit, MediumSpec, System};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeClass {
    /// Propagating in the gap and in the medium: `|R| <= 1`.
    PropagatingBoth,
    /// Evanescent in the gap, propagating in the medium: `|R| = 1`, `Im R != 0`.
    SuperradiantCapable,
    /// Evanescent everywhere: `R` real.
    FullyEvanescent,
    /// Propagating in the gap only (total reflection).
    GapOnly,
}

impl ModeClass {
    fn of(gap: Complex64, medium: Complex64) -> Self {
        match (gap.im == 0.0, medium.im == 0.0) {
            (true, true) => ModeClass::PropagatingBoth,
            (false, true) => ModeClass::SuperradiantCapable,
            (false, false) => ModeClass::FullyEvanescent,
            (true, false) => ModeClass::GapOnly,
        }
    }

    pub fn gap_propagating(self) -> bool {
        matches!(self, ModeClass::PropagatingBoth | ModeClass::GapOnly)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionCoefficient {
    pub value: Complex64,
    pub class: ModeClass,
}

/// `R = -(k_medium - k_gap) / (k_medium + k_gap)` with retarded roots.
pub fn reflection_from_roots(k_medium: Complex64, k_gap: Complex64) -> ReflectionCoefficient {
    let den = k_medium + k_gap;
    let value = if den == Complex64::new(0.0, 0.0) {
        Complex64::new(-1.0, 0.0)
    } else {
        -(k_medium - k_gap) / den
    };
    ReflectionCoefficient {
        value,
        class: ModeClass::of(k_gap, k_medium),
    }
}

/// Reflection off a half-space, with the mode given in the medium's rest frame.
pub fn reflection(mode: &Mode, medium: &MediumSpec, limit: Limit) -> ReflectionCoefficient {
    let k_sq = mode.k.norm_sq();
    reflection_from_roots(
        retarded_sqrt(medium_arg(medium, mode.omega, k_sq), mode.omega),
        retarded_sqrt(gap_arg(limit, mode.omega, k_sq), mode.omega),
    )
}

/// Both reflection coefficients of a lab-frame mode, body 2 at its shifted
/// frequency. Without retardation the gap root is frame independent; with
/// it, `omega^2 - k^2` is Lorentz invariant and the lab value is reused.
pub fn reflection_pair(
    mode: &Mode,
    system: &System,
) -> Result<(ReflectionCoefficient, ReflectionCoefficient, WaveNumbers)> {
    let w = wavenumbers(mode, system)?;
    let r1 = reflection_from_roots(w.body1_retarded(), w.gap_retarded());
    let gap2 = if w.k_perp_gap.im == 0.0 && w.shifted_omega < 0.0 {
        -w.k_perp_gap
    } else {
        w.k_perp_gap
    };
    let r2 = reflection_from_roots(w.body2_retarded(), gap2);
    Ok((r1, r2, w))
}

/// `e^{-2qd} (2 Im R1)(2 Im R2) / |1 - e^{-2qd} R1 R2|^2`.
///
/// With body 2 described at its own (signed) frequency this equals the
/// signed flux `1 - |S11|^2`; its magnitude is `|S21|^2`.
pub fn tunneling_weight(r1: Complex64, r2: Complex64, q: f64, d: f64) -> f64 {
    let e = (-2.0 * q * d).exp();
    let den = (Complex64::new(1.0, 0.0) - e * r1 * r2).norm_sqr();
    e * (2.0 * r1.im) * (2.0 * r2.im) / den
}

/// Closed-form `|S21|^2`.
pub fn s21_closed_form(r1: Complex64, r2: Complex64, q: f64, d: f64) -> f64 {
    tunneling_weight(r1, r2, q, d).abs()
}

/// Signed tunneling weight of a lab-frame mode. The gap must be evanescent.
pub fn mode_tunneling_weight(mode: &Mode, system: &System) -> Result<f64> {
    let (r1, r2, w) = reflection_pair(mode, system)?;
    if !w.gap_evanescent() {
        return Err(Error::invalid("closed form needs an evanescent gap"));
    }
    Ok(tunneling_weight(
        r1.value,
        r2.value,
        w.k_perp_gap.im,
        system.gap(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringSolution {
    pub s11: Complex64,
    /// Gap amplitude of the wave growing towards body 2.
    pub a: Complex64,
    /// Gap amplitude of the wave decaying towards body 2.
    pub b: Complex64,
    pub s21: Complex64,
    pub shifted_omega: f64,
    /// Whether the transmitted wave propagates inside body 2.
    pub transmitted_open: bool,
}

/// Pivot ratio below which the matching system counts as singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-13;

/// Solves the four matching conditions for a unit wave incident from body 1.
///
/// The gap field is `A e^{-i p z} + B e^{i p z}` and the transmitted wave is
/// `sqrt(k1/k2) S21 e^{i k2 z}` with `k2` the retarded body-2 root. The
/// unknown `A` is rescaled by `e^{-i p d}` so the system stays well scaled
/// for thick gaps.
pub fn smatrix_solve(mode: &Mode, system: &System) -> Result<ScatteringSolution> {
    let w = wavenumbers(mode, system)?;
    if !(mode.omega > 0.0 && w.body1_propagating() && w.k_perp_1.re > 0.0) {
        return Err(Error::invalid(
            "incident wave must propagate in body 1 with omega > 0",
        ));
    }
    if w.k_perp_2 == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularSystem { pivot_ratio: 0.0 });
    }
    let d = system.gap();
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let k1 = w.k_perp_1;
    let p = w.gap_retarded();
    let k2 = w.body2_retarded();
    let ph = (i * p * d).exp();
    let tau = (k1 / w.k_perp_2).sqrt() * (i * k2 * d).exp();

    #[rustfmt::skip]
    let m = Matrix4::new(
        -one, ph,     one,    zero,
        -k1,  p * ph, -p,     zero,
        zero, one,    ph,     -tau,
        zero, -p,     p * ph, -k2 * tau,
    );
    let rhs = Vector4::new(one, -k1, zero, zero);

    let lu = m.lu();
    let diag = lu.u().diagonal();
    let big = diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let small = diag.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let ratio = if big > 0.0 { small / big } else { 0.0 };
    if !(ratio > SINGULAR_PIVOT_RATIO) {
        return Err(Error::SingularSystem { pivot_ratio: ratio });
    }
    let x = lu
        .solve(&rhs)
        .ok_or(Error::SingularSystem { pivot_ratio: ratio })?;
    Ok(ScatteringSolution {
        s11: x[0],
        a: x[1] * ph,
        b: x[2],
        s21: x[3],
        shifted_omega: w.shifted_omega,
        transmitted_open: w.body2_propagating(),
    })
}

/// Incidence from body 2: the same problem seen from the rest frame of
/// body 2, conjugated to a positive incident frequency.
pub fn smatrix_solve_mirrored(mode: &Mode, system: &System) -> Result<ScatteringSolution> {
    let v = system.velocity();
    let shifted = mode.to_frame(Frame::Body2Rest, v);
    let mirrored = Mode::new(-shifted.omega, mode.k.neg());
    let swapped = System {
        pair: system.pair.swapped(),
        ..*system
    };
    smatrix_solve(&mirrored, &swapped)
}

/// `(1 - |S11|^2) - sgn(omega') |S21|^2`, with no transmitted flux when
/// body 2 is evanescent.
pub fn superunitarity_residual(sol: &ScatteringSolution) -> f64 {
    let transmitted = if sol.transmitted_open {
        sol.shifted_omega.signum() * sol.s21.norm_sqr()
    } else {
        0.0
    };
    (1.0 - sol.s11.norm_sqr()) - transmitted
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierPotentials {
    pub v1: f64,
    pub v2: f64,
    pub v_gap: f64,
}

/// Effective one-dimensional potentials seen by the mode.
pub fn barrier(mode: &Mode, system: &System) -> Result<BarrierPotentials> {
    let w = wavenumbers(mode, system)?;
    let k_sq = mode.k.norm_sq();
    Ok(BarrierPotentials {
        v1: -medium_arg(&system.pair.body1, mode.omega, k_sq),
        v2: -medium_arg(&system.pair.body2, w.shifted_omega, k_sq),
        v_gap: gap_arg(system.limit, mode.omega, k_sq).abs(),
    })
}

/// Frequency band `slope_lo |kx| < omega < slope_hi |kx|` on the side
/// `sgn(kx) = sgn(v)` where both bodies propagate with opposite frequency signs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperradiantWindow {
    pub slope_lo: f64,
    pub slope_hi: f64,
    pub nonempty: bool,
}

pub fn superradiant_window(pair: &HalfSpacePair) -> SuperradiantWindow {
    let lo = pair.body1.v0();
    let hi = pair.relative_velocity().abs() - pair.body2.v0();
    SuperradiantWindow {
        slope_lo: lo,
        slope_hi: hi,
        nonempty: hi > lo,
    }
}

/// Whether a lab-frame mode lies inside the superradiant window.
pub fn in_window(mode: &Mode, pair: &HalfSpacePair) -> bool {
    let k_sq = mode.k.norm_sq();
    let shifted = mode.omega - pair.relative_velocity() * mode.kx();
    mode.omega > 0.0
        && shifted < 0.0
        && medium_arg(&pair.body1, mode.omega, k_sq) > 0.0
        && medium_arg(&pair.body2, shifted, k_sq) > 0.0
}

/// Lab-frame energy of a pair of quanta with momenta `+kx` in body 1 and
/// `-kx` in body 2.
pub fn pair_energy(pair: &HalfSpacePair, kx: f64) -> f64 {
    (pair.body1.v0() + pair.body2.v0()) * kx.abs() - pair.relative_velocity() * kx
}

/// Whether some `kx` gives a pair of negative total energy.
pub fn pair_production_allowed(pair: &HalfSpacePair) -> bool {
    pair_energy(pair, pair.relative_velocity().signum()) < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{Dim, Geometry};
    use proptest::prelude::*;

    fn system(eps: f64, v_over_v0: f64, limit: Limit) -> System {
        let pair = HalfSpacePair::identical(eps, v_over_v0, 0.0).unwrap();
        System::new(pair, Geometry::new(1.0, Dim::Two).unwrap(), limit).unwrap()
    }

    #[test]
    fn fresnel_limit_for_normal_incidence() {
        let m = MediumSpec::at_rest(4.0).unwrap();
        let r = reflection(&Mode::line(1.0, 0.0), &m, Limit::Retarded);
        assert!((r.value - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(r.class, ModeClass::PropagatingBoth);
    }

    #[test]
    fn fully_evanescent_is_real() {
        let m = MediumSpec::at_rest(2.0).unwrap();
        let r = reflection(&Mode::line(0.1, 2.0), &m, Limit::NonRetarded);
        assert_eq!(r.value.im, 0.0);
        assert_eq!(r.class, ModeClass::FullyEvanescent);
    }

    #[test]
    fn mirrored_transmission_matches() {
        let s = system(2.0, 3.5, Limit::NonRetarded);
        let v0 = s.pair.body1.v0();
        let m = Mode::line(1.3 * v0, 1.0);
        let a = smatrix_solve(&m, &s).unwrap();
        let b = smatrix_solve_mirrored(&m, &s).unwrap();
        assert!((a.s21.norm_sqr() - b.s21.norm_sqr()).abs() < 1e-12 * a.s21.norm_sqr());
    }

    #[test]
    fn window_edges() {
        let below = HalfSpacePair::identical(1.0, 2.0 - 1e-9, 0.0).unwrap();
        let above = HalfSpacePair::identical(1.0, 2.0 + 1e-9, 0.0).unwrap();
        assert!(!superradiant_window(&below).nonempty);
        assert!(superradiant_window(&above).nonempty);
        assert!(!pair_production_allowed(&below));
        assert!(pair_production_allowed(&above));
    }

    #[test]
    fn barrier_signs_follow_propagation() {
        let s = system(1.0, 0.0, Limit::NonRetarded);
        let b = barrier(&Mode::line(0.0, 1.0), &s).unwrap();
        assert_eq!(b.v1, 1.0);
        assert_eq!(b.v_gap, 1.0);
    }

    proptest! {
        #[test]
        fn reality_of_reflection(w in 0.01..5.0f64, k in -5.0..5.0f64, eps in 1.0..10.0f64, ret in any::<bool>()) {
            let m = MediumSpec::at_rest(eps).unwrap();
            let limit = if ret { Limit::Retarded } else { Limit::NonRetarded };
            let r = reflection(&Mode::line(w, k), &m, limit).value;
            let rc = reflection(&Mode::line(-w, -k), &m, limit).value;
            prop_assert!((rc - r.conj()).norm() <= 1e-14);
        }

        #[test]
        fn reflection_magnitude_by_class(w in -5.0..5.0f64, k in -5.0..5.0f64, eps in 1.0..10.0f64, ret in any::<bool>()) {
            let m = MediumSpec::at_rest(eps).unwrap();
            let limit = if ret { Limit::Retarded } else { Limit::NonRetarded };
            let r = reflection(&Mode::line(w, k), &m, limit);
            match r.class {
                ModeClass::PropagatingBoth => prop_assert!(r.value.norm() <= 1.0 + 1e-14),
                ModeClass::SuperradiantCapable | ModeClass::GapOnly => {
                    prop_assert!((r.value.norm() - 1.0).abs() <= 1e-14)
                }
                ModeClass::FullyEvanescent => prop_assert_eq!(r.value.im, 0.0),
            }
            if r.class == ModeClass::SuperradiantCapable {
                prop_assert_eq!(r.value.im.signum(), w.signum());
            }
        }

        #[test]
        fn barrier_sign_matches_propagation(w in -5.0..5.0f64, k in -5.0..5.0f64, v in -3.0..3.0f64) {
            let s = system(2.0, v, Limit::NonRetarded);
            let m = Mode::line(w, k);
            let b = barrier(&m, &s).unwrap();
            let n = wavenumbers(&m, &s).unwrap();
            prop_assert_eq!(b.v1 < 0.0, n.k_perp_1.im == 0.0 && n.k_perp_1.re > 0.0);
            prop_assert_eq!(b.v2 < 0.0, n.k_perp_2.im == 0.0 && n.k_perp_2.re > 0.0);
        }

        #[test]
        fn window_agrees_with_pair_energy(v in -6.0..6.0f64, eps in 1.0..6.0f64) {
            let pair = HalfSpacePair::identical(eps, v, 0.0).unwrap();
            prop_assert_eq!(superradiant_window(&pair).nonempty, pair_production_allowed(&pair));
        }
    }
}
