use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Scalar field an operator or group element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Numeric,
    Exact,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Numeric => f.write_str("numeric"),
            Mode::Exact => f.write_str("exact"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument falls outside the supported domain, or a window is too small.
    #[error("out of range: {0}")]
    Range(String),
    /// Arguments violate a documented contract (window mismatch, tol <= 0, xi = 0, ...).
    #[error("contract violation: {0}")]
    Contract(String),
    /// The input has the wrong shape for the requested operation.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The operation cannot be carried out in the requested scalar mode.
    #[error("unsupported in {mode} mode: {reason}")]
    UnsupportedMode { mode: Mode, reason: String },
    #[error("mode mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: Mode, found: Mode },
    /// Malformed file or flag contents.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
