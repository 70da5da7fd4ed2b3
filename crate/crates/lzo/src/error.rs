//! Crate-wide error type.

use thiserror::Error;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while loading data, training, or selecting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("parse error at position {position}: {message}")]
    GridParse { position: usize, message: String },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("support mismatch: {0} vs {1}")]
    SupportMismatch(usize, usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fraction must lie in (0,1), got {0}")]
    InvalidFraction(f64),

    #[error("fold count {k} invalid for {n} samples (need 2 <= K <= n)")]
    InvalidFoldCount { k: usize, n: usize },

    #[error("no labeled samples")]
    NoLabeledSamples,

    #[error("unlabeled sample at index {0}")]
    UnlabeledSample(usize),

    #[error("class {0} has no samples")]
    MissingClass(usize),

    #[error("candidate grid is empty")]
    EmptyGrid,

    #[error("leave-p-out would enumerate {count} subsets, above the limit of {limit}")]
    SubsetGuard { count: u128, limit: u128 },

    #[error("invalid config: {0}")]
    Config(String),
}
