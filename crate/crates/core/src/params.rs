//! Material and geometric parameters.
//!
//! Speeds are measured in units of the vacuum light speed. In the
//! nonretarded limit only ratios to the in-medium speed `v0` enter, so
//! velocities above one are accepted there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-dispersive dielectric half-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumSpec {
    epsilon: f64,
    v0: f64,
    velocity: f64,
    temperature: f64,
}

impl MediumSpec {
    pub fn new(epsilon: f64, velocity: f64, temperature: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 1.0) {
            return Err(Error::invalid(format!(
                "epsilon must be finite and >= 1, got {epsilon}"
            )));
        }
        if !velocity.is_finite() {
            return Err(Error::invalid("velocity must be finite"));
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::invalid(format!(
                "temperature must be >= 0, got {temperature}"
            )));
        }
        Ok(Self {
            epsilon,
            v0: 1.0 / epsilon.sqrt(),
            velocity,
            temperature,
        })
    }

    /// Builds the medium from its wave speed `v0 = 1/sqrt(epsilon)`.
    pub fn from_v0(v0: f64, velocity: f64, temperature: f64) -> Result<Self> {
        if !(v0.is_finite() && v0 > 0.0 && v0 <= 1.0) {
            return Err(Error::invalid(format!("v0 must lie in (0, 1], got {v0}")));
        }
        let mut m = Self::new(1.0 / (v0 * v0), velocity, temperature)?;
        m.v0 = v0;
        Ok(m)
    }

    pub fn at_rest(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 0.0, 0.0)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn velocity(&self) -> f64 {
        self.velocity
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn with_velocity(mut self, velocity: f64) -> Self {
        self.velocity = velocity;
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    /// Warns when the lab-frame speed is not small against light.
    pub fn velocity_warning(&self, threshold: f64) -> Option<String> {
        (self.velocity.abs() > threshold).then(|| {
            format!(
                "|v| = {} exceeds {threshold}; the Galilean treatment of the moving body assumes |v| << c",
                self.velocity.abs()
            )
        })
    }
}

/// Body 1 occupies `z < 0`, body 2 occupies `z > d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpacePair {
    pub body1: MediumSpec,
    pub body2: MediumSpec,
}

impl HalfSpacePair {
    pub fn new(body1: MediumSpec, body2: MediumSpec) -> Self {
        Self { body1, body2 }
    }

    /// Identical media, body 1 at rest and body 2 sliding at `v_over_v0 * v0`.
    pub fn identical(epsilon: f64, v_over_v0: f64, temperature: f64) -> Result<Self> {
        let rest = MediumSpec::new(epsilon, 0.0, temperature)?;
        let moving = rest.with_velocity(v_over_v0 * rest.v0());
        Ok(Self::new(rest, moving))
    }

    /// Velocity of body 2 relative to body 1.
    pub fn relative_velocity(&self) -> f64 {
        self.body2.velocity - self.body1.velocity
    }

    pub fn same_material(&self) -> bool {
        self.body1.epsilon == self.body2.epsilon
    }

    /// Roles exchanged, seen from body 2 at rest.
    pub fn swapped(&self) -> Self {
        Self {
            body1: self.body2.with_velocity(0.0),
            body2: self.body1.with_velocity(-self.relative_velocity()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn from_usize(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            _ => Err(Error::invalid(format!(
                "spatial dimension must be 2 or 3, got {d}"
            ))),
        }
    }

    pub fn value(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    gap: f64,
    dim: Dim,
}

impl Geometry {
    pub fn new(gap: f64, dim: Dim) -> Result<Self> {
        if !(gap.is_finite() && gap > 0.0) {
            return Err(Error::invalid(format!("gap must be positive, got {gap}")));
        }
        Ok(Self { gap, dim })
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }
}

/// Treatment of the vacuum gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Limit {
    /// `c -> infinity` in the gap: `k_perp = i |k_par|`.
    #[default]
    NonRetarded,
    /// Finite light speed in the gap.
    Retarded,
}

/// Everything a per-mode or integrated calculation needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct System {
    pub pair: HalfSpacePair,
    pub geometry: Geometry,
    pub limit: Limit,
}

impl System {
    pub fn new(pair: HalfSpacePair, geometry: Geometry, limit: Limit) -> Result<Self> {
        if limit == Limit::Retarded {
            for (name, b) in [("body1", &pair.body1), ("body2", &pair.body2)] {
                if b.velocity.abs() >= 1.0 {
                    return Err(Error::invalid(format!(
                        "{name}: |v| must be below the light speed in the retarded treatment"
                    )));
                }
            }
        }
        Ok(Self {
            pair,
            geometry,
            limit,
        })
    }

    pub fn nonretarded(pair: HalfSpacePair, geometry: Geometry) -> Self {
        Self {
            pair,
            geometry,
            limit: Limit::NonRetarded,
        }
    }

    pub fn gap(&self) -> f64 {
        self.geometry.gap
    }

    pub fn dim(&self) -> Dim {
        self.geometry.dim
    }

    pub fn velocity(&self) -> f64 {
        self.pair.relative_velocity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v0_follows_epsilon() {
        let m = MediumSpec::at_rest(4.0).unwrap();
        assert_eq!(m.v0(), 0.5);
        let m = MediumSpec::from_v0(0.25, 0.0, 0.0).unwrap();
        assert_eq!(m.epsilon(), 16.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(MediumSpec::new(0.5, 0.0, 0.0).is_err());
        assert!(MediumSpec::new(2.0, f64::NAN, 0.0).is_err());
        assert!(MediumSpec::new(2.0, 0.0, -1.0).is_err());
        assert!(Geometry::new(0.0, Dim::Two).is_err());
        assert!(Dim::from_usize(4).is_err());
    }

    #[test]
    fn retarded_requires_subluminal_motion() {
        let pair = HalfSpacePair::identical(1.0, 3.0, 0.0).unwrap();
        let g = Geometry::new(1.0, Dim::Two).unwrap();
        assert!(System::new(pair, g, Limit::Retarded).is_err());
        assert!(System::new(pair, g, Limit::NonRetarded).is_ok());
    }

    #[test]
    fn swapping_reverses_motion() {
        let pair = HalfSpacePair::new(
            MediumSpec::new(2.0, 0.0, 0.0).unwrap(),
            MediumSpec::new(3.0, 0.4, 0.0).unwrap(),
        );
        let s = pair.swapped();
        assert_eq!(s.body1.epsilon(), 3.0);
        assert_eq!(s.relative_velocity(), -0.4);
    }
}
