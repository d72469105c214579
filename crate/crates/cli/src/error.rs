use thiserror::Error;

/// Failures of a run, each with its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error("identity check failed: {0}")]
    Identity(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::NotConverged(_) => 3,
            CliError::Identity(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<qcherenkov::Error> for CliError {
    fn from(e: qcherenkov::Error) -> Self {
        use qcherenkov::Error as E;
        match e {
            E::InvalidParameter(_) | E::SingularSystem { .. } => CliError::Config(e.to_string()),
            E::NotConverged { .. } => CliError::NotConverged(e.to_string()),
            E::IdentityViolation { .. } => CliError::Identity(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}
