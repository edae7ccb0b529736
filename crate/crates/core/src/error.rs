//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or batch dimensions do not line up.
    #[error("shape error: {0}")]
    Shape(String),

    /// An argument is outside its documented range.
    #[error("parameter error: {0}")]
    Param(String),

    /// An iterative routine exhausted its iteration budget.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// A neighbor graph split into multiple components.
    #[error("disconnected graph: component sizes {sizes:?}; try a larger k")]
    DisconnectedGraph { sizes: Vec<usize> },

    /// Malformed text input (CSV, config file).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Malformed binary input (IDX, model file).
    #[error("format error: {0}")]
    Format(String),

    /// A numerical optimization produced a non-finite value.
    #[error("divergence at {unit} {index}: {msg}")]
    Divergence {
        unit: &'static str,
        index: usize,
        msg: String,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
