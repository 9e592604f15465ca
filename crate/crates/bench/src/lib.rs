//! Experiment driver for `gpr-core`: conformance and property suites, cost
//! scaling, slice staging, floating-point leaves and the application runners.

pub mod fit;
pub mod input;
pub mod oracles;
pub mod report;
pub mod run;
pub mod spec;
pub mod suites;

use gpr_core::apps::AppError;
use gpr_core::extractor::ExtractError;
use gpr_core::fp_leaf::FpError;
use gpr_core::matmul::GprError;
use gpr_core::slice::SliceError;
use thiserror::Error;

pub use report::{Outcome, Report};
pub use run::run;
pub use spec::{Command, ExperimentSpec, Format, ModelChoice};

/// Environment variable naming the default report directory.
pub const OUT_DIR_ENV: &str = "GPR_OUT_DIR";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error("bad input: {0}")]
    Input(String),
    #[error(transparent)]
    Gpr(#[from] GprError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error(transparent)]
    App(#[from] AppError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
