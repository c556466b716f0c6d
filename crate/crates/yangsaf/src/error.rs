//! Error type shared across the crate.

use std::fmt;

/// Errors produced by analysis, synthesis and I/O operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is out of its documented range.
    Parameter(String),
    /// The input signal carries no usable periodic evidence.
    NoPeriodicEvidence,
    /// A trajectory contains non-positive F0 over a span that must be warped.
    NonPositiveF0 { time: f64 },
    /// Two sequences that must align have different lengths.
    LengthMismatch { expected: usize, actual: usize },
    /// Malformed or unsupported WAV data.
    Wav(String),
    /// Underlying I/O failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::NoPeriodicEvidence => write!(f, "no periodic evidence in input"),
            Error::NonPositiveF0 { time } => {
                write!(f, "non-positive F0 at t = {time:.6} s; cannot warp")
            }
            Error::LengthMismatch { expected, actual } => {
                write!(f, "length mismatch: expected {expected}, got {actual}")
            }
            Error::Wav(msg) => write!(f, "wav: {msg}"),
            Error::Io(msg) => write!(f, "io: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
