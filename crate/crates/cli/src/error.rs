use std::io;
use std::path::Path;

use thiserror::Error;

/// Failure of a subcommand, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad config values, unreadable inputs, unwritable outputs.
    #[error("{0}")]
    Usage(String),
    /// Inputs that were read but failed validation.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    pub fn io(action: &str, path: &Path, e: io::Error) -> Self {
        CliError::Usage(format!("cannot {action} {}: {e}", path.display()))
    }
}
