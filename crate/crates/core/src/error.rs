use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("rejected input: {0}")]
    Rejected(String),

    /// An iterate or an intermediate quantity stopped being finite.
    #[error("numerical failure: {0}")]
    NonFinite(String),

    /// The Savitzky-Golay pipeline produced no usable derivative estimates.
    #[error("estimator failed: {0}")]
    EstimatorFailed(String),

    /// Metric denominator is zero; reported explicitly, never as 0 or 1.
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// Training loss became non-finite; history up to the abort is preserved.
    #[error("training diverged at epoch {epoch}")]
    Diverged { epoch: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("model file error: {0}")]
    ModelFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
