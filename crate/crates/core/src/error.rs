use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series for {function} did not converge: {reason}")]
    Convergence { function: &'static str, reason: String },

    #[error("argument outside the supported domain of {function}: {reason}")]
    Domain { function: &'static str, reason: String },

    #[error("degenerate parameters: {0}")]
    DegenerateParameter(String),

    #[error("variable transform is singular: |1 - y| = {distance:e}")]
    SingularTransform { distance: f64 },

    #[error("RK4 step fell below {min_step:e} without meeting tolerance")]
    StepUnderflow { min_step: f64 },

    #[error("no extinction theorem covers this regime: {0}")]
    UnsupportedRegime(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

impl Error {
    /// Short structured name, used by the CLI when reporting numerical errors.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "InvalidParameterError",
            Error::Convergence { .. } => "ConvergenceError",
            Error::Domain { .. } => "DomainError",
            Error::DegenerateParameter(_) => "DegenerateParameterError",
            Error::SingularTransform { .. } => "SingularTransformError",
            Error::StepUnderflow { .. } => "StepUnderflowError",
            Error::UnsupportedRegime(_) => "UnsupportedRegimeError",
            Error::InternalConsistency(_) => "InternalConsistencyError",
        }
    }
}
