//! Batch certification runs: configuration, claim suite, feasibility scan,
//! hull experiments and report files.

pub mod commands;
pub mod config;

pub use commands::{certify, feasibility, hull, report, CertifyOutcome, FeasibilityOutcome, HullRun};
pub use config::RunConfig;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CLAIM_FAILURE: u8 = 1;
pub const EXIT_INVALID_CONFIG: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("{0}")]
    Run(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        EXIT_INVALID_CONFIG
    }
}
