//! Verification scenarios over seeded profile families, and the plumbing behind the `radon` tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod estimate;
mod jsonnum;
pub mod report;
pub mod scenarios;

use std::path::PathBuf;

pub use config::{GeometrySpec, Scenario, ScenarioConfig, Tolerances};
pub use estimate::{estimate_constant, ConstantEstimate};
pub use report::{Check, RatioReport, Series};
pub use scenarios::{run_scenario, RunOptions};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("argument error: {0}")]
    Argument(String),
    #[error(transparent)]
    Core(#[from] radon_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }
}
