//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by scene construction, parsing, fitting, and
/// configuration search.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A scene or sample file could not be decoded. The message names the
    /// offending key.
    #[error("parse error: {0}")]
    Parse(String),

    /// A least-squares problem has no unique solution.
    #[error("rank-deficient fit: {0}")]
    RankDeficient(String),

    /// A request exceeds a hard enumeration limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
