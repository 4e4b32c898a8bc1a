use std::path::PathBuf;

use crate::config::ConfigError;

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] torsion_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use torsion_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::Compute(E::WeylCapExceeded { .. }) => EXIT_RESOURCE,
            CliError::Compute(E::InsufficientSamples { .. } | E::EmptyGrid(_) | E::Inexact(_)) => {
                EXIT_CONFIG
            }
            CliError::Compute(_) => EXIT_VIOLATION,
        }
    }
}
