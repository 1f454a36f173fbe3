//! Command implementations behind the `fcat` binary.

pub mod commands;
pub mod config;
pub mod format;

use std::path::PathBuf;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Bad input: configuration, parameters, or an unusable deformation.
pub const EXIT_VALIDATION: i32 = 1;
/// A numerical invariant did not hold.
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Core(fcat_core::Error),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Config(String),
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Invariant(_) => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Config(msg) => write!(f, "config: {msg}"),
            CliError::Invariant(msg) => write!(f, "invariant failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<fcat_core::Error> for CliError {
    fn from(e: fcat_core::Error) -> Self {
        CliError::Core(e)
    }
}
