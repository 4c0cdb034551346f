//! Configuration-driven front end for `levy-inspect`.
//!
//! A run reads one JSON document ([`config::RunConfig`]), dispatches to the
//! library and writes CSV/JSON files that each carry the config hash and seed.

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use levy_inspect::Error as CoreError;
use thiserror::Error;

pub use commands::{run, RunOutcome};
pub use config::{parse, LoadedConfig, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration does not match the schema.
    #[error("config: {0}")]
    Schema(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for bad input, 3 for unsupported regimes, 4 for numerical failure,
    /// 5 for file system errors. Exit 1 is reserved for failed checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Core(e) => match e {
                CoreError::InvalidParameter(_) | CoreError::Config(_) | CoreError::EmptySample => 2,
                CoreError::Domain { .. } | CoreError::Regime(_) | CoreError::UnsupportedMoment(_) => 3,
                CoreError::NoConvergence { .. } | CoreError::Quadrature(_) => 4,
            },
            CliError::Io { .. } => 5,
        }
    }
}

/// Reads, parses and validates a configuration file.
pub fn load(path: &Path) -> Result<LoadedConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text)
}
