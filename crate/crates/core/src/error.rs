use thiserror::Error;

use crate::networks::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(ValidationReport),
    #[error("network is not tree-child")]
    NotTreeChild,
    #[error("network has {leaves} leaves and {reticulations} reticulations; expected the maximal {expected}")]
    NotMaximal {
        leaves: usize,
        reticulations: usize,
        expected: usize,
    },
    #[error("edge {0} -> {1} is not a free edge")]
    NotFreeEdge(usize, usize),
    #[error("network profile violates n + k = t + 1 (n={n}, k={k}, t={t})")]
    ProfileMismatch { n: usize, k: usize, t: usize },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("TC_{{{n},{k}}} is not available from the count provider")]
    MissingCount { n: usize, k: usize },
    #[error("precision budget exceeded: {0}")]
    PrecisionBudget(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
