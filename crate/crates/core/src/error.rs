use crate::quadrature::QuadratureEstimate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matching system is numerically singular (pivot ratio {pivot_ratio:e})")]
    SingularSystem { pivot_ratio: f64 },

    #[error("quadrature did not converge: value {} err {} after {} evaluations", .estimate.value, .estimate.err_estimate, .estimate.n_evals)]
    NotConverged { estimate: QuadratureEstimate },

    #[error("identity `{name}` violated: residual {residual:e} exceeds tolerance {tolerance:e}")]
    IdentityViolation {
        name: String,
        residual: f64,
        tolerance: f64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
