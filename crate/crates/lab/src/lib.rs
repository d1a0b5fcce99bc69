//! Scenario files, suites and reports on top of `blaschke-core`.

use std::path::{Path, PathBuf};

pub mod calibration;
pub mod config;
pub mod report;
pub mod run;
pub mod scenario;
pub mod suites;

pub use calibration::Calibration;
pub use config::Config;
pub use report::{Format, RunReport};
pub use run::{run_config, Command, RunOptions};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error: {0}")]
    Schema(String),
}

impl LabError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
