//! Per-mode Green's kernels of `-(d^2/dz^2 + kappa^2(z))`.
//!
//! The kernel is built from two homogeneous solutions: `u1`, regular in
//! body 1 (outgoing into `z -> -infinity`), and `u2`, regular in body 2. In
//! the gap
//!
//! ```text
//! u1(z) = e^{-ipz} + R e^{ipz},   u2(z) = e^{ip(z-d)} + R~ e^{-ip(z-d)},
//! ```
//!
//! and `G(x, z) = C u1(min) u2(max)` with `C = -1 / W[u1, u2]`, so that
//! `dG/dx` jumps by `-1` across `x = z`. Inside body 1 both solutions are
//! written in the depth coordinate `zeta = -z` with `psi_pm = e^{pm i p~ zeta}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mode::Mode;
use crate::params::System;
use crate::scattering::reflection_pair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GreensKind {
    /// Both points in the gap.
    OutOut,
    /// Field point in the gap, source point in body 1.
    OutIn,
    /// Both points in body 1.
    InIn,
}

/// Amplitudes of `psi_+` and `psi_-` inside body 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmissionCoefficients {
    /// `u1` inside body 1.
    pub v: Complex64,
    pub w: Complex64,
    /// `u2` continued into body 1.
    pub v_tilde: Complex64,
    pub w_tilde: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeGreens {
    pub kind: GreensKind,
    /// Retarded gap root `p`.
    pub p: Complex64,
    /// Retarded body-1 root `p~`.
    pub p_body: Complex64,
    /// Reflection of body 1 at the lab frequency.
    pub r1: Complex64,
    /// Reflection of body 2 at its own frequency.
    pub r2: Complex64,
    pub coeffs: TransmissionCoefficients,
    /// `C = -e^{ipd} / (2ip (1 - R R~ e^{2ipd}))`.
    pub prefactor: Complex64,
    pub gap: f64,
}

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn greens(mode: &Mode, system: &System, kind: GreensKind) -> Result<ModeGreens> {
    let (r1, r2, w) = reflection_pair(mode, system)?;
    let p = w.gap_retarded();
    let pb = w.body1_retarded();
    if p == Complex64::new(0.0, 0.0) || pb == Complex64::new(0.0, 0.0) {
        return Err(Error::invalid("kernel undefined at a branch point"));
    }
    let d = system.gap();
    let (r, rt) = (r1.value, r2.value);
    let e_plus = (I * p * d).exp();
    let e_minus = (-I * p * d).exp();
    let ratio = p / pb;
    let coeffs = TransmissionCoefficients {
        v: 0.5 * ((ONE + r) + ratio * (ONE - r)),
        w: 0.5 * ((ONE + r) - ratio * (ONE - r)),
        v_tilde: 0.5 * ((e_minus + rt * e_plus) + ratio * (rt * e_plus - e_minus)),
        w_tilde: 0.5 * ((e_minus + rt * e_plus) - ratio * (rt * e_plus - e_minus)),
    };
    let den = ONE - r * rt * e_plus * e_plus;
    Ok(ModeGreens {
        kind,
        p,
        p_body: pb,
        r1: r,
        r2: rt,
        coeffs,
        prefactor: -e_plus / (2.0 * I * p * den),
        gap: system.gap(),
    })
}

impl ModeGreens {
    /// `u1` and its derivative, valid for `z <= d`.
    pub fn u1(&self, z: f64) -> (Complex64, Complex64) {
        if z >= 0.0 {
            let a = (I * self.p * z).exp();
            let b = (-I * self.p * z).exp();
            (b + self.r1 * a, I * self.p * (self.r1 * a - b))
        } else {
            self.inside(self.coeffs.v, self.coeffs.w, z)
        }
    }

    /// `u2` and its derivative, valid for `z <= d`.
    pub fn u2(&self, z: f64) -> (Complex64, Complex64) {
        if z >= 0.0 {
            let a = (I * self.p * (z - self.gap)).exp();
            let b = (-I * self.p * (z - self.gap)).exp();
            (a + self.r2 * b, I * self.p * (a - self.r2 * b))
        } else {
            self.inside(self.coeffs.v_tilde, self.coeffs.w_tilde, z)
        }
    }

    fn inside(&self, v: Complex64, w: Complex64, z: f64) -> (Complex64, Complex64) {
        let plus = (-I * self.p_body * z).exp();
        let minus = (I * self.p_body * z).exp();
        (
            v * plus + w * minus,
            I * self.p_body * (w * minus - v * plus),
        )
    }

    /// `W[u1, u2] = u1 u2' - u1' u2`, constant in `z`.
    pub fn wronskian(&self) -> Complex64 {
        -1.0 / self.prefactor
    }

    /// Returns `(G, dG/dx, dG/dz, d2G/dxdz)`. At `x == z` the branch `x <= z`
    /// is used.
    pub fn derivatives(&self, x: f64, z: f64) -> [Complex64; 4] {
        let c = self.prefactor;
        if x > z {
            let (a, da) = self.u1(z);
            let (b, db) = self.u2(x);
            [c * a * b, c * a * db, c * da * b, c * da * db]
        } else {
            let (a, da) = self.u1(x);
            let (b, db) = self.u2(z);
            [c * a * b, c * da * b, c * a * db, c * da * db]
        }
    }

    pub fn eval(&self, x: f64, z: f64) -> Complex64 {
        self.derivatives(x, z)[0]
    }

    /// Whether `(x, z)` lies in the domain of this kernel's kind.
    pub fn in_domain(&self, x: f64, z: f64) -> bool {
        let gap = |s: f64| (0.0..=self.gap).contains(&s);
        match self.kind {
            GreensKind::OutOut => gap(x) && gap(z),
            GreensKind::OutIn => gap(x) && z <= 0.0,
            GreensKind::InIn => x <= 0.0 && z <= 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{Dim, Geometry, HalfSpacePair, Limit};

    fn setup(v: f64) -> System {
        let pair = HalfSpacePair::identical(2.0, v, 0.0).unwrap();
        System::new(
            pair,
            Geometry::new(1.0, Dim::Two).unwrap(),
            Limit::NonRetarded,
        )
        .unwrap()
    }

    #[test]
    fn wronskian_is_constant() {
        let s = setup(3.5);
        let v0 = s.pair.body1.v0();
        let g = greens(&Mode::line(1.4 * v0, 1.0), &s, GreensKind::OutOut).unwrap();
        let w = g.wronskian();
        for z in [-2.0, -0.3, 0.0, 0.25, 0.7, 1.0] {
            let (a, da) = g.u1(z);
            let (b, db) = g.u2(z);
            assert!((a * db - da * b - w).norm() < 1e-12 * w.norm(), "z = {z}");
        }
    }

    #[test]
    fn outgoing_inside_body_one() {
        let s = setup(3.5);
        let v0 = s.pair.body1.v0();
        let g = greens(&Mode::line(1.4 * v0, 1.0), &s, GreensKind::InIn).unwrap();
        assert!(g.coeffs.w.norm() < 1e-14);
        assert!((g.coeffs.v - (ONE + g.r1)).norm() < 1e-14);
    }

    #[test]
    fn kernel_is_symmetric() {
        let s = setup(3.0);
        let v0 = s.pair.body1.v0();
        let g = greens(&Mode::line(1.2 * v0, 0.8), &s, GreensKind::OutOut).unwrap();
        for (x, z) in [(0.2, 0.7), (-0.5, 0.3), (-0.5, -1.5)] {
            assert!((g.eval(x, z) - g.eval(z, x)).norm() < 1e-15);
        }
    }

    #[test]
    fn domains() {
        let s = setup(3.0);
        let g = greens(&Mode::line(0.5, 0.8), &s, GreensKind::OutIn).unwrap();
        assert!(g.in_domain(0.5, -0.1));
        assert!(!g.in_domain(-0.5, -0.1));
    }
}
