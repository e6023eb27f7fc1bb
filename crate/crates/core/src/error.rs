use thiserror::Error;

/// Errors raised by the matrix routines and the certifiers built on them.
///
/// Matrix positions are reported 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchurError {
    #[error("{op}: shape mismatch, {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("zero entry at ({row}, {col})")]
    ZeroEntry { row: usize, col: usize },

    #[error("{routine} did not converge after {iterations} iterations")]
    Convergence { routine: &'static str, iterations: usize },

    #[error("not multiplicative: {condition} failed (residual {residual:e})")]
    NotMultiplicative { condition: String, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} exceeds the limit of {limit}")]
    ResourceLimit { what: String, limit: usize },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}

pub type Result<T> = std::result::Result<T, SchurError>;
