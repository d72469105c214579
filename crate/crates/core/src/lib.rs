//! Quantum Cherenkov friction between two transparent dielectric half-spaces
//! in relative lateral motion, modelled with a scalar field.
//!
//! Two independent routes to the friction force are provided: a scattering
//! route through the superradiant transmission probability, and a
//! fluctuational route through Green's kernels and surface-reduced source
//! correlators. The second one also yields the energy budget of the pair.
//!
//! Units: `ħ = k_B = 1`. Per-mode quantities take frequencies and wavenumbers
//! in units where the vacuum light speed is one; integrated observables are
//! reported in the dimensionless form `g = f d^(D+1) / (ħ v0)`.

pub mod branch;
pub mod domain;
pub mod error;
pub mod mode;
pub mod observables;
pub mod params;
pub mod quadrature;
pub mod rytov;
pub mod scattering;
pub mod thermal;

pub use branch::{wavenumbers, WaveNumbers};
pub use error::{Error, Result};
pub use mode::{doppler, Frame, Mode, WaveVector};
pub use observables::{friction, g_curve, radiated_power, retardation_convergence, FrictionResult};
pub use params::{Dim, Geometry, HalfSpacePair, Limit, MediumSpec, System};
pub use quadrature::{QuadratureConfig, QuadratureEstimate};
pub use scattering::{reflection, smatrix_solve, ReflectionCoefficient, ScatteringSolution};
