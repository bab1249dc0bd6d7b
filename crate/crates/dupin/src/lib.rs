//! Verification suites, reports and diagrams on top of `dupin-core`.

use std::path::PathBuf;

pub mod diagram;
pub mod report;
pub mod suites;

pub use report::{emit_report, Report, ReportFormat, Status, VerificationCase};
pub use suites::{run_suite, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("{name} = {value} is out of range: {expected}")]
    Range { name: &'static str, value: String, expected: &'static str },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] dupin_core::Error),
}

impl CliError {
    /// Usage errors exit with 2, everything else with 1.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::UnknownSuite(_) | CliError::Range { .. } => 2,
            _ => 1,
        }
    }
}
