//! Command implementations behind the `pinwheel` binary.

pub mod args;
mod commands;
pub mod manifest;

use std::fmt;

pub use args::Cli;
pub use commands::{run, STEPS_CAP};
pub use manifest::{Parameters, RunManifest};

/// Failure of a command, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flag values or malformed input files.
    Param(String),
    Io(std::io::Error),
    /// A size limit such as the inflation cap.
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Param(_) => 2,
            CliError::Io(_) => 3,
            CliError::Cap(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Param(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Cap(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pinwheel::Error> for CliError {
    fn from(e: pinwheel::Error) -> Self {
        use pinwheel::Error as E;
        match e {
            E::Io(io) => CliError::Io(io),
            E::Size(_) => CliError::Cap(e.to_string()),
            _ => CliError::Param(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
