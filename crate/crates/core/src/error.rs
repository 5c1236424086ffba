use thiserror::Error;

/// Errors surfaced by the exact-computation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("not an ADE configuration: {0}")]
    NotAde(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("computation failed: {0}")]
    Computation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
