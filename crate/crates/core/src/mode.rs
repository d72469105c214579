//! Plane-wave modes and Galilean frame changes.

use serde::{Deserialize, Serialize};

use crate::params::Dim;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    Body1Rest,
    Body2Rest,
    CenterOfMass,
}

impl Frame {
    /// Velocity of this frame in the rest frame of body 1, given the
    /// relative velocity `v` of body 2.
    pub fn velocity(self, v: f64) -> f64 {
        match self {
            Frame::Body1Rest => 0.0,
            Frame::CenterOfMass => 0.5 * v,
            Frame::Body2Rest => v,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Frame::Body1Rest => "body1",
            Frame::CenterOfMass => "cm",
            Frame::Body2Rest => "body2",
        }
    }
}

/// Wavevector parallel to the interfaces: one component in D = 2, two in D = 3.
/// The first component always lies along the direction of motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WaveVector {
    Line(f64),
    Plane(f64, f64),
}

impl WaveVector {
    pub fn kx(self) -> f64 {
        match self {
            WaveVector::Line(kx) | WaveVector::Plane(kx, _) => kx,
        }
    }

    pub fn norm_sq(self) -> f64 {
        match self {
            WaveVector::Line(kx) => kx * kx,
            WaveVector::Plane(kx, ky) => kx * kx + ky * ky,
        }
    }

    pub fn norm(self) -> f64 {
        match self {
            WaveVector::Line(kx) => kx.abs(),
            WaveVector::Plane(kx, ky) => kx.hypot(ky),
        }
    }

    pub fn dim(self) -> Dim {
        match self {
            WaveVector::Line(_) => Dim::Two,
            WaveVector::Plane(..) => Dim::Three,
        }
    }

    pub fn neg(self) -> Self {
        match self {
            WaveVector::Line(kx) => WaveVector::Line(-kx),
            WaveVector::Plane(kx, ky) => WaveVector::Plane(-kx, -ky),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub omega: f64,
    pub k: WaveVector,
    pub frame: Frame,
}

impl Mode {
    pub fn new(omega: f64, k: WaveVector) -> Self {
        Self {
            omega,
            k,
            frame: Frame::Body1Rest,
        }
    }

    pub fn line(omega: f64, kx: f64) -> Self {
        Self::new(omega, WaveVector::Line(kx))
    }

    pub fn plane(omega: f64, kx: f64, ky: f64) -> Self {
        Self::new(omega, WaveVector::Plane(kx, ky))
    }

    pub fn kx(&self) -> f64 {
        self.k.kx()
    }

    /// The partner `(-omega, -k)`.
    pub fn conjugate(&self) -> Self {
        Self {
            omega: -self.omega,
            k: self.k.neg(),
            frame: self.frame,
        }
    }

    /// Re-expresses the mode in `target`, with `v` the velocity of body 2
    /// relative to body 1.
    pub fn to_frame(&self, target: Frame, v: f64) -> Self {
        let u = target.velocity(v) - self.frame.velocity(v);
        doppler(self, u, target)
    }
}

/// Frequency seen in a frame moving with velocity `u` along x.
pub fn doppler(mode: &Mode, u: f64, frame: Frame) -> Mode {
    Mode {
        omega: mode.omega - u * mode.kx(),
        k: mode.k,
        frame,
    }
}
