//! Perpendicular wavenumbers and their branch choices.
//!
//! Principal roots are kept in [`WaveNumbers`]. Scattering and kernel code
//! uses the retarded continuation: a propagating root carries the sign of
//! the frequency, an evanescent one is `i sqrt(-arg)` regardless of it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mode::{Frame, Mode};
use crate::params::{Limit, MediumSpec, System};

/// `sqrt(arg)` on the principal branch of a real argument.
pub fn principal_sqrt(arg: f64) -> Complex64 {
    if arg >= 0.0 {
        Complex64::new(arg.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-arg).sqrt())
    }
}

/// Retarded root: outgoing for `omega > 0`, the mirror image for `omega < 0`.
pub fn retarded_sqrt(arg: f64, omega: f64) -> Complex64 {
    if arg >= 0.0 {
        let r = arg.sqrt();
        Complex64::new(if omega < 0.0 { -r } else { r }, 0.0)
    } else {
        Complex64::new(0.0, (-arg).sqrt())
    }
}

/// `epsilon omega^2 - k^2` inside a medium at rest.
pub fn medium_arg(medium: &MediumSpec, omega: f64, k_sq: f64) -> f64 {
    medium.epsilon() * omega * omega - k_sq
}

/// `omega^2 - k^2` in the gap, or `-k^2` without retardation.
pub fn gap_arg(limit: Limit, omega: f64, k_sq: f64) -> f64 {
    match limit {
        Limit::NonRetarded => -k_sq,
        Limit::Retarded => omega * omega - k_sq,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumbers {
    /// Gap root; exactly `i |k_par|` without retardation.
    pub k_perp_gap: Complex64,
    /// Body-1 root, principal branch.
    pub k_perp_1: Complex64,
    /// Body-2 root at the shifted frequency, principal branch.
    pub k_perp_2: Complex64,
    /// Frequency seen by body 2.
    pub shifted_omega: f64,
    pub omega: f64,
    pub limit: Limit,
}

impl WaveNumbers {
    pub fn gap_retarded(&self) -> Complex64 {
        flip(self.k_perp_gap, self.omega)
    }

    pub fn body1_retarded(&self) -> Complex64 {
        flip(self.k_perp_1, self.omega)
    }

    pub fn body2_retarded(&self) -> Complex64 {
        flip(self.k_perp_2, self.shifted_omega)
    }

    pub fn gap_evanescent(&self) -> bool {
        self.k_perp_gap.re == 0.0
    }

    pub fn body1_propagating(&self) -> bool {
        self.k_perp_1.im == 0.0
    }

    pub fn body2_propagating(&self) -> bool {
        self.k_perp_2.im == 0.0
    }
}

fn flip(root: Complex64, omega: f64) -> Complex64 {
    if root.im == 0.0 && omega < 0.0 {
        -root
    } else {
        root
    }
}

/// Wavenumbers of a mode given in the rest frame of body 1.
pub fn wavenumbers(mode: &Mode, system: &System) -> Result<WaveNumbers> {
    if mode.frame != Frame::Body1Rest {
        return Err(Error::invalid(
            "wavenumbers expects a mode in the rest frame of body 1",
        ));
    }
    if mode.k.dim() != system.dim() {
        return Err(Error::invalid(format!(
            "mode has {} parallel components but the geometry is D = {}",
            mode.k.dim().value() - 1,
            system.dim().value()
        )));
    }
    let k_sq = mode.k.norm_sq();
    let k_perp_gap = match system.limit {
        Limit::NonRetarded => Complex64::new(0.0, mode.k.norm()),
        Limit::Retarded => principal_sqrt(gap_arg(Limit::Retarded, mode.omega, k_sq)),
    };
    let shifted = mode.to_frame(Frame::Body2Rest, system.velocity()).omega;
    Ok(WaveNumbers {
        k_perp_gap,
        k_perp_1: principal_sqrt(medium_arg(&system.pair.body1, mode.omega, k_sq)),
        k_perp_2: principal_sqrt(medium_arg(&system.pair.body2, shifted, k_sq)),
        shifted_omega: shifted,
        omega: mode.omega,
        limit: system.limit,
    })
}
