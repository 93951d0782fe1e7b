use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}: {1}")]
    UnsupportedDimension(usize, &'static str),

    #[error("division by zero")]
    DivisionByZero,

    #[error("leading symbol is not invertible: {0}")]
    NotInvertible(String),

    #[error("{operation}: component of degree {degree} requested but the expansion is only known down to degree {floor}")]
    FloorTooHigh {
        operation: String,
        degree: i32,
        floor: i32,
    },

    #[error("{operation}: expansion from degree {top} down to {floor} exceeds the depth guard of {limit}")]
    DepthGuard {
        operation: String,
        top: i32,
        floor: i32,
        limit: i32,
    },

    #[error("one-form is not selfadjoint: {0}")]
    NotSelfadjoint(String),

    #[error("invalid operator spec: {0}")]
    InvalidSpec(String),

    #[error("zeta oracle: {0}")]
    Oracle(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
