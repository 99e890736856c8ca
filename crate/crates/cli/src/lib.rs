//! Harness around the wear-simulation core: JSON configuration, trace files,
//! CSV exports, parameter sweeps, and plot-data reports.

pub mod config;
pub mod exports;
pub mod report;
pub mod sweep;
pub mod trace_file;

pub use icfs_wearsim_core as core;

use std::path::PathBuf;
use thiserror::Error;

/// Process exit code for configuration problems.
pub const EXIT_CONFIG: i32 = 2;
/// Process exit code for I/O problems.
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("i/o: {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Report(String),
    #[error("simulation: {0}")]
    Sim(#[from] icfs_wearsim_core::engine::SimError),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| HarnessError::Io { path, source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Sim(_) => EXIT_CONFIG,
            HarnessError::Io { .. } | HarnessError::Report(_) => EXIT_IO,
        }
    }
}
