//! Fluctuational route: Green's kernels of the two-body problem, surface
//! reduced source correlators and the resulting momentum and energy fluxes.

pub mod correlator;
pub mod fluxes;
pub mod greens;

pub use correlator::{gap_correlator, u_weight, GapCorrelator, UWeight};
pub use fluxes::{fluxes, frame_identities, frame_report, FrameReport, PowerBudget};
pub use greens::{greens, GreensKind, ModeGreens, TransmissionCoefficients};
