use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a prime")]
    NotPrime(u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("invalid quiver: {0}")]
    Quiver(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("degree window too small: {0}")]
    Window(String),
    #[error("algebra is not finite-dimensional within the computed window; pass the windowed-dual acknowledgment to proceed")]
    InfiniteAlgebra,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported degrees: {0}")]
    UnsupportedDegree(String),
    #[error("parse error at {path}: {msg}")]
    Parse { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
