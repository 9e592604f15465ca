//! Algorithms that reduce to the packed matrix product: polynomial
//! convolution, Boolean products, CFG recognition, unweighted APSP, triangle
//! counting, and a classifier for the recurrences they induce.

use thiserror::Error;

use crate::matmul::GprError;

pub mod apsp;
pub mod boolean;
pub mod cfg;
pub mod classify;
pub mod poly;
pub mod triangle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppError {
    #[error(transparent)]
    Gpr(#[from] GprError),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("unknown terminal {0:?}")]
    UnknownTerminal(char),
    #[error("empty input string")]
    EmptyString,
    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    AsymmetricInput(usize, usize),
    #[error("adjacency matrix has a self loop at {0}")]
    NonzeroDiagonal(usize),
    #[error("alpha {0} is outside (0, 1)")]
    InvalidAlpha(String),
    #[error("parse error: {0}")]
    Parse(String),
}
