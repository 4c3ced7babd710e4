//! Command-line front end for `stgp`: run configuration, report writing,
//! mesh generation and the verification suites.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 solver
//! non-convergence or failed verification, 3 I/O error while writing.

pub mod commands;
pub mod config;
pub mod report;
pub mod scenarios;
pub mod verify;

pub use commands::{cmd_info, cmd_meshgen, cmd_project, THREADS_ENV};
pub use config::RunConfig;
pub use report::RunReport;
pub use verify::{cmd_verify, VerifyLevel, TAMPER_ENV};

use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Solver(String),
    #[error("verification failed")]
    VerifyFailed,
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Solver(_) | CliError::VerifyFailed => 2,
            CliError::Io { .. } => 3,
        }
    }
}
