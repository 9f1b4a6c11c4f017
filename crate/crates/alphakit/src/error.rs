use std::io;

use thiserror::Error;

/// Process exit codes. Each outcome class maps to exactly one code.
pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const INVALID: u8 = 2;
    pub const NOT_CERTIFIED: u8 = 3;
    pub const PRECONDITION: u8 = 4;
    pub const NOT_PASSED: u8 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("theorem precondition failed: {0}")]
    Precondition(String),
    #[error("computation failed: {0}")]
    Core(alphakit_core::Error),
    #[error("solution not certified: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NotCertified { residual: f64, tolerance: f64 },
    #[error("verification did not pass: {0}")]
    NotPassed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => exit::IO,
            CliError::Invalid(_) => exit::INVALID,
            CliError::Core(_) | CliError::NotCertified { .. } => exit::NOT_CERTIFIED,
            CliError::Precondition(_) => exit::PRECONDITION,
            CliError::NotPassed(_) => exit::NOT_PASSED,
        }
    }
}

impl From<alphakit_core::Error> for CliError {
    fn from(e: alphakit_core::Error) -> Self {
        use alphakit_core::Error as E;
        match e {
            E::Precondition(msg) => CliError::Precondition(msg.to_string()),
            E::NonConvergence { .. } => CliError::Core(e),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            CliError::Io(e.into())
        } else {
            CliError::Invalid(format!("JSON: {e}"))
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            match e.into_kind() {
                csv::ErrorKind::Io(io) => CliError::Io(io),
                _ => unreachable!("checked is_io_error"),
            }
        } else {
            CliError::Invalid(format!("CSV: {e}"))
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
