//! Library side of the experiment runner; the binary in `main.rs` is a thin
//! argument parser over these functions.

pub mod commands;
pub mod config;
pub mod pool;

use std::fmt;

/// Errors of a CLI invocation, split by exit code:
/// 1 config error, 2 data error, 3 training abort.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(lavarnet::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<lavarnet::Error> for CliError {
    fn from(e: lavarnet::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Core(lavarnet::Error::Contract(_)) => 1,
            CliError::Core(lavarnet::Error::Train { .. }) => 3,
            CliError::Core(_) => 2,
        }
    }
}
