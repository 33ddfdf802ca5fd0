//! Command implementations behind the `fano` binary. Each command builds a
//! serializable report; rendering to text or JSON is separate so that the
//! JSON can be parsed back by tests and other tools.

pub mod input;
pub mod report;

use std::fmt;

use fano_lattice::discgroup::DiscError;
use fano_lattice::fano::FanoError;
use fano_lattice::lattice::LatticeError;

/// Failure classes with distinct process exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Unreadable or malformed input (exit 2).
    Parse(String),
    /// Well-formed input outside the domain of the command (exit 3).
    Domain(String),
    /// A self-check inside the library failed (exit 4).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Domain(m) => write!(f, "error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<FanoError> for CliError {
    fn from(e: FanoError) -> Self {
        match e {
            FanoError::InternalVerificationFailed(_) | FanoError::MethodDisagreement { .. } => {
                CliError::Internal(e.to_string())
            }
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::LinAlg(_) => CliError::Parse(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<DiscError> for CliError {
    fn from(e: DiscError) -> Self {
        CliError::Domain(e.to_string())
    }
}
