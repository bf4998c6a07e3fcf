use thiserror::Error;

/// Errors for Gaussian-state and Fock-space computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {what} = {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("structural error: {0}")]
    Structure(String),

    #[error("state is not physical (min eigenvalue of sigma + (i/2)Delta is {min_eigenvalue})")]
    Physicality { min_eigenvalue: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
