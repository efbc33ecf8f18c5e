//! Experiment harness around `oblivch-core`: seeded, reproducible runs with
//! JSON records, CSV sweeps, and plain-text code/channel files.
//!
//! Every experiment derives one stream per unit of work from the master
//! seed, aggregates integer-valued per-unit results in index order, and only
//! then performs floating-point reductions, so records are byte-identical
//! across worker counts. The worker count comes from `OBLIVCH_WORKERS`; no
//! other environment variable affects behavior.

use std::fmt;

pub mod config;
pub mod experiments;
pub mod formats;
pub mod record;
pub mod runner;

pub use config::ExperimentConfig;
pub use record::{ExperimentRecord, Verdict};

/// Harness-level error: anything that prevents an experiment from running
/// to a record. Exit code 2 territory, as opposed to failed verdicts.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Core(oblivch_core::Error),
    Io(std::io::Error),
    Json(serde_json::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Config(msg) => write!(f, "config: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io: {e}"),
            CliError::Json(e) => write!(f, "json: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<oblivch_core::Error> for CliError {
    fn from(e: oblivch_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
