//! Command-line front end: configuration, report encodings, the four
//! commands and the verification suite.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use std::fmt;

pub use config::{Cli, Command, Format, RunConfig};
pub use report::{CheckResult, Report};

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] sadic_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serialize(String),
}

impl CliError {
    pub(crate) fn serialize(e: impl fmt::Display) -> Self {
        CliError::Serialize(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        use sadic_core::Error as E;
        match self {
            CliError::Core(E::ResourceLimit(_)) => EXIT_RESOURCE,
            CliError::Core(E::Consistency(_)) => EXIT_VERIFICATION,
            _ => EXIT_USAGE,
        }
    }
}

/// Runs one command and returns its report.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    match config.command {
        Command::Analyze => commands::analyze(config),
        Command::Classify => commands::classify(config),
        Command::Witness => commands::witness(config),
        Command::Verify => verify::run(config),
    }
}

/// Runs, renders and writes; returns the process exit status.
pub fn execute(config: &RunConfig, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32 {
    let result = run(config).and_then(|report| {
        let text = report.render(config.format)?;
        match &config.out {
            Some(path) => std::fs::write(path, &text)?,
            None => stdout.write_all(text.as_bytes())?,
        }
        Ok(report)
    });
    match result {
        Ok(report) if report.passed() => EXIT_OK,
        Ok(report) => {
            for failure in report.failures() {
                let _ = writeln!(stderr, "check failed: {}: {}", failure.name, failure.detail);
            }
            EXIT_VERIFICATION
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
