use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Loop or configuration failed geometric validation.
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("quadrature not converged: estimated residual {residual:.3e} exceeds {tolerance:.3e}")]
    Quadrature { residual: f64, tolerance: f64 },

    #[error("winding function jumps by {mismatch:.3e} across a domain interface")]
    BranchDiscontinuity { mismatch: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Validation(_) => 2,
            Error::NonConvergence { .. } | Error::Quadrature { .. } | Error::BranchDiscontinuity { .. } => 3,
            Error::NonFinite(_) => 4,
        }
    }
}
