//! Exact packed recursive matrix multiplication with bit-cost accounting.
//!
//! Matrices are packed as Laurent polynomials in a power-of-two base, the
//! recursion keeps every packed coefficient an unscaled input block, and the
//! target coefficient is read back with a two-round rounding extractor. Every
//! arithmetic step is charged to a [`CostLedger`].

pub mod apps;
pub mod bigint;
pub mod extractor;
pub mod fp_leaf;
pub mod ledger;
pub mod matmul;
pub mod matrix;
pub mod packing;
pub mod rng;
pub mod slice;

pub use bigint::Int;
pub use ledger::{CostLedger, CostModel, LedgerSnapshot};
pub use matrix::IntMatrix;
pub use packing::{GlobalBase, PackedMatrix};
