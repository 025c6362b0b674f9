use thiserror::Error;

/// Errors surfaced by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or non-finite input parameters.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A computation was requested outside its regime of validity
    /// (e.g. normal form of a dynamically stable configuration).
    #[error("regime error in {module}: {message}")]
    Regime { module: &'static str, message: String },

    /// Numerical failure during integration or optimization.
    #[error("numeric failure: {message}")]
    Numeric { message: String },

    /// A state violated the Heisenberg physicality bound.
    #[error("non-physical state: {0}")]
    NonPhysical(String),
}

impl Error {
    pub(crate) fn regime(module: &'static str, message: impl Into<String>) -> Self {
        Error::Regime { module, message: message.into() }
    }

    pub(crate) fn numeric(message: impl Into<String>) -> Self {
        Error::Numeric { message: message.into() }
    }
}
