//! Command-line front end for `langton-core`: problem and trace files,
//! the `check`, `run`, `verify`, `count-flags` and `fuzz` commands, and
//! their exit codes.

pub mod commands;
pub mod flags;
pub mod problem;
pub mod trace;

use langton_core::langton::VerifyFailure;
use langton_core::Error;

pub use commands::{cmd_check, cmd_count_flags, cmd_fuzz, cmd_run, cmd_verify, CheckReport, FuzzReport};
pub use problem::{CapsFile, Problem, ProblemFile};
pub use trace::{StepFile, TraceFile};

pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const GENERIC_UNSTABLE: i32 = 3;
    pub const CAP_EXCEEDED: i32 = 4;
    pub const VERIFY_FAILED: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("verification failed: {0}")]
    Verify(#[from] VerifyFailure),
    #[error("verification failed: problem echo mismatch")]
    EchoMismatch,
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Core(Error::Parse(_)) => exit::PARSE,
            CliError::Core(Error::GenericUnstable { .. }) => exit::GENERIC_UNSTABLE,
            CliError::Core(Error::EnumerationTooLarge { .. } | Error::IterationCapExceeded(_)) => exit::CAP_EXCEEDED,
            CliError::Verify(_) | CliError::EchoMismatch | CliError::Failed(_) => exit::VERIFY_FAILED,
            CliError::Io(_) | CliError::Core(_) => exit::OTHER,
        }
    }
}
