use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point lies outside the domain of a potential, metric or map.
    #[error("domain error: {0}")]
    Domain(String),
    /// An argument is out of range or inconsistent with the others.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Tensor operation requested in an unsupported dimension.
    #[error("dimension error: expected {expected}, found {found}")]
    Dimension { expected: String, found: usize },
    /// The metric (or a Jacobian) could not be inverted.
    #[error("singular matrix at {0}")]
    Singular(String),
    /// A lifted system could not be constructed from the given potential.
    #[error("construction error: {0}")]
    Construction(String),
    /// ODE integration failed (step budget exhausted, non-finite state).
    #[error("integration error: {0}")]
    Integration(String),
    /// Quadrature, root finding or a consistency cross-check failed.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Time reparametrization encountered a non-positive factor.
    #[error("reparametrization error: {0}")]
    Reparametrization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
