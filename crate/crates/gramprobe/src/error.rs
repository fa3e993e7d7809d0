//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A grammar cannot produce the requested number of distinct pairs.
    #[error("grammar for phenomenon '{phenomenon}' can yield only {capacity} distinct pairs, {requested} requested")]
    Capacity {
        phenomenon: String,
        capacity: usize,
        requested: usize,
    },

    /// Malformed grammar definition.
    #[error("invalid grammar '{phenomenon}': {reason}")]
    Grammar { phenomenon: String, reason: String },

    /// A JSONL line could not be parsed.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// Input data violates a documented invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// A word is not in the closed vocabulary.
    #[error("token '{token}' is not in the vocabulary")]
    Vocab { token: String },

    /// A phenomenon has too few pairs to stratify.
    #[error("cannot stratify phenomenon '{phenomenon}': has {count} pairs, need at least 2")]
    Stratification { phenomenon: String, count: usize },

    /// Tensor dimensions do not line up.
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    Dimension {
        expected: usize,
        got: usize,
        context: String,
    },

    /// A sequence exceeds the model context length.
    #[error("sequence of {len} tokens (plus BOS) exceeds context length {context_len}")]
    SequenceTooLong { len: usize, context_len: usize },

    /// A layer or feature index is out of range.
    #[error("index {index} out of range for {what} of size {size}")]
    IndexOutOfRange {
        index: usize,
        size: usize,
        what: &'static str,
    },

    /// Training produced a non-finite loss.
    #[error("training diverged at step {step}: loss is not finite")]
    TrainingDiverged { step: usize },

    /// Bad argument to an operation.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Margin tables are not aligned by pair id.
    #[error("margin tables misaligned: {0}")]
    Alignment(String),

    /// The control-feature pool is too small.
    #[error("control pool has only {available} eligible features, need {needed}")]
    ControlPool { needed: usize, available: usize },

    /// Bad experiment configuration.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 configuration, 3 data, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Argument(_) => 2,
            Error::Capacity { .. }
            | Error::Grammar { .. }
            | Error::Parse { .. }
            | Error::Validation(_)
            | Error::Vocab { .. }
            | Error::Stratification { .. }
            | Error::Checkpoint(_)
            | Error::Io(_)
            | Error::Json(_) => 3,
            Error::TrainingDiverged { .. } => 4,
            _ => 3,
        }
    }
}
