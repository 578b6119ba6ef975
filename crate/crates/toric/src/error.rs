//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("{0:?} is not a face of the fan")]
    NotAFace(Vec<usize>),

    #[error("stellar subdivision ray {0} coincides with existing ray {1}")]
    DuplicateSubdivisionRay(String, usize),

    #[error("stellar subdivision ray {0} is not primitive")]
    ImprimitiveSubdivisionRay(String),

    #[error("fan is not valid, complete and smooth: {0}")]
    FanPrecondition(String),

    #[error("torsion {0:?} detected in a graded piece; the input fan cannot be a toric manifold")]
    TorsionDetected(Vec<String>),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("cup product degree {0} exceeds the top degree {1}")]
    DegreeOverflow(usize, usize),

    #[error("linear map does not induce a bijection of ray sets")]
    NoRayBijection,

    #[error("ring map is not a verified isomorphism: {0}")]
    NotAnIsomorphism(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("integer field holds a non-integer value: {0}")]
    NotAnInteger(String),
}
