//! Command-layer companion to `mwng-core`: experiment configuration files,
//! output serialization, parallel batch execution, and the subcommand
//! implementations behind the `mwng` binary.

pub mod batch;
pub mod commands;
pub mod config;
pub mod formats;

use std::fmt;

/// Command failures, split by exit code: configuration and usage problems
/// exit 1, runtime (generation/simulation/I-O) failures exit 2.
#[derive(Debug)]
pub enum CliError {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "configuration error: {e:#}"),
            CliError::Runtime(e) => write!(f, "runtime error: {e:#}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Shorthand for command results.
pub type CmdResult = Result<(), CliError>;

/// Tags an error as a configuration problem (exit 1).
pub fn config_err(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Config(e.into())
}

/// Tags an error as a runtime problem (exit 2).
pub fn runtime_err(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Runtime(e.into())
}
