//! Exact rational scalars, vectors and matrices.

mod matrix;
mod rat;
mod vector;

pub use matrix::{det, solve_linear, LinearSolution, RatMat};
pub use rat::{gcd_all, Rat};
pub use vector::{denominator_lcm, RatVec};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
}
