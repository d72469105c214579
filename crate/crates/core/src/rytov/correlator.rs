//! Source correlators reduced to surface terms, and the flux weight `U`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mode::{Frame, Mode};
use crate::params::System;
use crate::scattering::ReflectionCoefficient;
use crate::thermal::a_weight;

use super::greens::{greens, GreensKind, ModeGreens};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UForm {
    /// `1 - |R|^2`, gap propagating.
    Propagating,
    /// `2 Im R`, gap evanescent.
    Evanescent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UWeight {
    pub value: f64,
    pub form: UForm,
}

pub fn u_weight(r: &ReflectionCoefficient) -> UWeight {
    if r.class.gap_propagating() {
        UWeight {
            value: 1.0 - r.value.norm_sqr(),
            form: UForm::Propagating,
        }
    } else {
        UWeight {
            value: 2.0 * r.value.im,
            form: UForm::Evanescent,
        }
    }
}

/// Flux `J = Im(u* u')` of a gap solution, divided by `-|p|`. For
/// `u = e^{-ipz} + R e^{ipz}` this reproduces [`u_weight`].
pub fn flux_ratio(u: Complex64, du: Complex64, p: Complex64) -> f64 {
    (u.conj() * du).im / -p.norm()
}

/// Field correlator `<phi(x) phi*(y)>` of one mode, split by source body.
///
/// Each part is a surface term of the Green's kernel: body-1 sources on
/// `z = 0`, body-2 sources on `z = d`, weighted by `a(omega, T)` at the
/// frequency each body sees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapCorrelator {
    pub greens: ModeGreens,
    pub a1: f64,
    pub a2: f64,
}

pub fn gap_correlator(mode: &Mode, system: &System) -> Result<GapCorrelator> {
    let g = greens(mode, system, GreensKind::OutOut)?;
    let shifted = mode.to_frame(Frame::Body2Rest, system.velocity()).omega;
    Ok(GapCorrelator {
        greens: g,
        a1: a_weight(mode.omega, system.pair.body1.temperature()),
        a2: a_weight(shifted, system.pair.body2.temperature()),
    })
}

impl GapCorrelator {
    /// `(i s / 2) [dG(x,zs)/dzs G*(y,zs) - G(x,zs) dG*(y,zs)/dzs]` and its
    /// derivative in `y`.
    fn surface(&self, x: f64, y: f64, zs: f64, sign: f64) -> (Complex64, Complex64) {
        let gx = self.greens.derivatives(x, zs);
        let gy = self.greens.derivatives(y, zs);
        let k = Complex64::new(0.0, 0.5 * sign);
        let val = k * (gx[2] * gy[0].conj() - gx[0] * gy[2].conj());
        let dy = k * (gx[2] * gy[1].conj() - gx[0] * gy[3].conj());
        (val, dy)
    }

    pub fn body1(&self, x: f64, y: f64) -> Complex64 {
        self.a1 * self.surface(x, y, 0.0, 1.0).0
    }

    pub fn body2(&self, x: f64, y: f64) -> Complex64 {
        self.a2 * self.surface(x, y, self.greens.gap, -1.0).0
    }

    pub fn total(&self, x: f64, y: f64) -> Complex64 {
        self.body1(x, y) + self.body2(x, y)
    }

    /// `d/dy` of the body-1 and body-2 parts.
    pub fn dy_parts(&self, x: f64, y: f64) -> (Complex64, Complex64) {
        (
            self.a1 * self.surface(x, y, 0.0, 1.0).1,
            self.a2 * self.surface(x, y, self.greens.gap, -1.0).1,
        )
    }

    /// `d/dy` of the full correlator at `y = x` for `x` inside body 1.
    ///
    /// Both sources see `u1(x)` times the gap current of `u2`, which is
    /// constant across the gap. It is read at `z = d`, where `u2` is of order
    /// one, instead of at `z = 0`, where it grows like `e^{|p| d}`.
    pub fn dy_inside(&self, x: f64) -> Complex64 {
        let g = &self.greens;
        let (b, db) = g.u2(g.gap);
        let current = (db * b.conj()).im;
        let (a, da) = g.u1(x);
        -g.prefactor.norm_sqr() * (self.a1 - self.a2) * current * a * da.conj()
    }

    /// `Im G(x, y)`: the equilibrium correlator per unit `a`.
    pub fn im_greens(&self, x: f64, y: f64) -> Complex64 {
        let g = self.greens.eval(x, y);
        (g - g.conj()) / Complex64::new(0.0, 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{Dim, Geometry, HalfSpacePair, Limit, MediumSpec};
    use crate::scattering::{reflection, ModeClass};

    #[test]
    fn weight_forms() {
        let r = ReflectionCoefficient {
            value: Complex64::new(-1.0, 0.0),
            class: ModeClass::PropagatingBoth,
        };
        assert_eq!(u_weight(&r).value, 0.0);
        let m = MediumSpec::at_rest(2.0).unwrap();
        let r = reflection(&Mode::line(0.2, 3.0), &m, Limit::NonRetarded);
        assert_eq!(u_weight(&r).value, 0.0);
    }

    #[test]
    fn flux_ratio_reproduces_weight() {
        let m = MediumSpec::at_rest(3.0).unwrap();
        for (w, k, limit) in [
            (1.0, 1.2, Limit::NonRetarded),
            (-1.0, -1.2, Limit::NonRetarded),
            (2.0, 1.0, Limit::Retarded),
            (1.0, 1.5, Limit::Retarded),
        ] {
            let r = reflection(&Mode::line(w, k), &m, limit);
            let p = match limit {
                Limit::NonRetarded => Complex64::new(0.0, f64::abs(k)),
                Limit::Retarded => crate::branch::retarded_sqrt(w * w - k * k, w),
            };
            for z in [0.0, 0.3, 0.9] {
                let a = (Complex64::i() * p * z).exp();
                let b = (-Complex64::i() * p * z).exp();
                let u = b + r.value * a;
                let du = Complex64::i() * p * (r.value * a - b);
                let j = flux_ratio(u, du, p);
                assert!((j - u_weight(&r).value).abs() < 1e-13, "{w} {k} {z}");
            }
        }
    }

    #[test]
    fn factored_inside_derivative_matches_surface_terms() {
        let pair = HalfSpacePair::identical(2.0, 3.0, 0.0).unwrap();
        let s = System::new(
            pair,
            Geometry::new(1.0, Dim::Two).unwrap(),
            Limit::NonRetarded,
        )
        .unwrap();
        let v0 = s.pair.body1.v0();
        for (w, k) in [
            (1.3 * v0, 1.0),
            (-1.3 * v0, -1.0),
            (0.9, 0.4),
            (2.0 * v0, 2.0),
        ] {
            let c = gap_correlator(&Mode::line(w, k), &s).unwrap();
            for x in [-0.1, -0.5, -2.0] {
                let (a, b) = c.dy_parts(x, x);
                let direct = a + b;
                let scale = a.norm() + b.norm() + 1e-3;
                assert!(
                    (c.dy_inside(x) - direct).norm() <= 1e-12 * scale,
                    "{w} {k} {x}: {} vs {direct} ({a}, {b})",
                    c.dy_inside(x)
                );
            }
        }
    }

    #[test]
    fn body2_silent_outside_window_at_zero_temperature() {
        let pair = HalfSpacePair::identical(2.0, 3.0, 0.0).unwrap();
        let s = System::new(
            pair,
            Geometry::new(1.0, Dim::Two).unwrap(),
            Limit::NonRetarded,
        )
        .unwrap();
        let v0 = s.pair.body1.v0();
        // Body 1 propagates, body 2 is evanescent.
        let c = gap_correlator(&Mode::line(2.5 * v0, 1.0), &s).unwrap();
        let (_, d2) = c.dy_parts(0.5, 0.5);
        let flux = (Complex64::new(0.0, -2.5 * v0) * d2).re;
        assert!(flux.abs() < 1e-15);
    }
}
