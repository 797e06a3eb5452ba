use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Invalid parameters supplied by the caller (field degree, variant, ...).
    #[error("configuration error: {0}")]
    Config(String),
    /// An operation was applied outside its domain (inverse of zero, projecting
    /// the nucleus, ideal centre of a non-ideal line, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration or search would exceed its configured budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A structural hypothesis did not hold on the supplied data.
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
