//! Command-line front end for `majorana-core`. JSON file formats back the
//! `majorana` subcommands; `majorana selftest` runs the acceptance suite.

use std::fmt;

pub mod acceptance;
pub mod cli;
pub mod json;
pub mod sample;

/// A failed command. Validation problems exit with status 2, numerical
/// failures on valid input with status 1.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "invalid input: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<majorana_core::Error> for CliError {
    fn from(err: majorana_core::Error) -> Self {
        if err.is_numerical() {
            CliError::Numerical(err.to_string())
        } else {
            CliError::Validation(err.to_string())
        }
    }
}
