//! Command-line companion to `cordon-core`: file formats, rendering,
//! experiment configs, CSV output and the parallel sweep runner.
//!
//! Everything operating-system-flavored lives here so the core crate can stay
//! `no_std`. The `cordon` binary in this package wires these modules to a
//! small set of subcommands.

pub mod clock;
pub mod csvout;
pub mod expcfg;
pub mod mapfmt;
pub mod netdump;
pub mod parallel;
pub mod render;

use std::fmt;

/// Process exit codes of the `cordon` binary.
pub mod exit {
    /// Success.
    pub const OK: i32 = 0;
    /// File system or other I/O failure.
    pub const IO: i32 = 1;
    /// Bad usage: malformed files, invalid parameters, mismatched inputs.
    pub const CONTRACT: i32 = 2;
    /// The instance cannot be solved (a target cannot be sealed).
    pub const INFEASIBLE: i32 = 3;
    /// A verification found a leaking placement.
    pub const VERIFY: i32 = 4;
}

/// Error type carried out of every subcommand; each variant maps to one exit
/// code.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Contract(String),
    Infeasible(String),
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => exit::IO,
            CliError::Contract(_) => exit::CONTRACT,
            CliError::Infeasible(_) => exit::INFEASIBLE,
            CliError::Verify(_) => exit::VERIFY,
        }
    }

    pub fn io(context: &str, err: std::io::Error) -> CliError {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(msg)
            | CliError::Contract(msg)
            | CliError::Infeasible(msg)
            | CliError::Verify(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

/// Parse failure in one of the text formats, with the 1-based line it was
/// detected on when known.
#[derive(Debug)]
pub struct FormatError {
    pub line: Option<usize>,
    pub msg: String,
}

impl FormatError {
    pub(crate) fn at(line: usize, msg: impl Into<String>) -> FormatError {
        FormatError { line: Some(line), msg: msg.into() }
    }

    pub(crate) fn whole(msg: impl Into<String>) -> FormatError {
        FormatError { line: None, msg: msg.into() }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.msg),
            None => f.write_str(&self.msg),
        }
    }
}

impl std::error::Error for FormatError {}
