use thiserror::Error;

/// Errors raised by complex construction, genericity checks and the
/// measure-theoretic operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate vertex: {0}")]
    DuplicateVertex(String),
    #[error("degenerate simplex (affinely dependent vertices): {0}")]
    DegenerateSimplex(String),
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),
    #[error("covector is not generic: {0}")]
    NonGenericCovector(String),
    #[error("failed to sample a generic covector after {0} rejections")]
    GenericityFailure(usize),
    #[error("selection is not closed under faces: {0}")]
    NotFaceClosed(String),
    #[error("constructible functions live on different complexes")]
    ComplexMismatch,
    #[error("ill-conditioned fit (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("input is not convex: {0}")]
    NotConvex(String),
    #[error("mixed-dimensional maximal simplices: {0}")]
    MixedDimension(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
