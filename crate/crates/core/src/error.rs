use thiserror::Error;

/// Errors produced by basis construction, time evolution, observables, and
/// the classical ensemble engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters or out-of-range input.
    #[error("configuration error: {0}")]
    Config(String),

    /// Objects that must share a basis have incompatible dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A numerical method failed, did not converge, or exceeded a tolerance.
    /// Tolerance violations are reported, never papered over by renormalizing.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// An operation was applied to the wrong kind of object.
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
