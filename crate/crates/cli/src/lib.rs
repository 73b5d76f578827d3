//! Command-line front end: file formats, SVG output and the `wgg` subcommands.
//!
//! Exit codes: 0 success, 1 drawing rejected, 2 input error, 3 consistency
//! failure, 4 construction failure.

pub mod commands;
pub mod formats;
pub mod render;

use thiserror::Error;

pub use commands::{run, Cli};

pub const EXIT_OK: u8 = 0;
pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CONSISTENCY: u8 = 3;
pub const EXIT_CONSTRUCTION: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Rejected,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Success => EXIT_OK,
            Outcome::Rejected => EXIT_REJECTED,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("construction failed: {0}")]
    Construction(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Consistency(_) => EXIT_CONSISTENCY,
            CliError::Construction(_) => EXIT_CONSTRUCTION,
        }
    }
}
