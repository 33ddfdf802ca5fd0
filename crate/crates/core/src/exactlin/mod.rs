//! Exact integer and rational linear algebra.
//!
//! Everything here runs on arbitrary-precision integers or rationals; there is
//! no floating point anywhere in the crate.

mod det;
mod kernel;
mod matrix;
mod signature;
mod snf;

use thiserror::Error;

pub use det::determinant;
pub use kernel::{hermite_columns, hermite_rows, kernel_basis};
pub use matrix::{bigvec, IntMatrix, RatMatrix};
pub use signature::signature;
pub use snf::{smith_normal_form, SnfResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NonSymmetric,
    #[error("matrix is degenerate (determinant 0)")]
    Degenerate,
    #[error("rows have unequal lengths")]
    Ragged,
    #[error("shape mismatch: {left:?} times {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
}
