//! Batch drivers behind the `stellar-qec` binary.
//!
//! Every driver turns a validated config into a complete output document
//! (CSV or JSON) held in memory; [`run`] writes it out and maps failures to
//! exit codes.

pub mod args;
pub mod config;
pub mod drivers;
pub mod output;
pub mod stirap;
pub mod sweep;

use std::fmt;
use std::path::Path;

use stellar_qec::Error;

use args::{Cli, Command};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, config file or output path.
    Config(String),
    /// Leakage, convergence or other numerical breakdown.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfRange(_)
            | Error::RegisterTooLarge(_)
            | Error::VacuousBound { .. }
            | Error::DimensionMismatch(_)
            | Error::SubsystemOutOfRange { .. }
            | Error::DuplicateIndex(_)
            | Error::MalformedProtocol(_) => CliError::Config(e.to_string()),
            Error::NotHermitian(_)
            | Error::InvalidState(_)
            | Error::IncompleteKraus(_)
            | Error::CodespaceLeakage(_)
            | Error::Unidentifiable
            | Error::VanishingSensitivity(_)
            | Error::ZeroAcceptance
            | Error::StepUnderflow(_)
            | Error::InsufficientTransfer(_) => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Produces the output document for a parsed command line.
pub fn render(cli: &Cli) -> CliResult<String> {
    let common = &cli.common;
    match &cli.command {
        Command::QfiSweep(a) => {
            let cfg = a.merge(config::load(common.config.as_deref())?, common);
            let opts = sweep::RunOptions {
                jobs: common.jobs.unwrap_or(0),
                timing: common.timing,
            };
            let rows = sweep::run_qfi_sweep(&cfg, &opts)?;
            Ok(sweep::to_csv(&cfg, &opts, &rows))
        }
        Command::Stirap(a) => {
            let cfg = a.merge(config::load(common.config.as_deref())?, common);
            let run = stirap::run_stirap(&cfg)?;
            Ok(stirap::to_csv(&cfg, &run))
        }
        Command::Protocol(a) => {
            let cfg = a.merge(config::load(common.config.as_deref())?, common);
            drivers::run_protocol(&cfg).map(|v| output::json_document(&v))
        }
        Command::Threshold(a) => {
            let cfg = a.merge(config::load(common.config.as_deref())?, common);
            let rows = drivers::run_threshold(&cfg)?;
            Ok(drivers::threshold_csv(&cfg, &rows))
        }
        Command::Source(a) => {
            let cfg = a.merge(config::load(common.config.as_deref())?, common);
            drivers::run_source(&cfg).map(|v| output::json_document(&v))
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Runs a command line to completion and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match render(&cli).and_then(|text| write_output(cli.common.out.as_deref(), &text)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("stellar-qec: {e}");
            e.exit_code()
        }
    }
}
