//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: unknown language label {text:?}")]
    UnknownLabel { line: usize, text: String },
    #[error("line {line}: empty surface form")]
    EmptySurface { line: usize },
    #[error("line {line}: surface form contains whitespace")]
    SurfaceWhitespace { line: usize },
    #[error("line {line}: more than three tab-separated fields")]
    TooManyFields { line: usize },
    #[error("invalid token: {0}")]
    InvalidToken(String),
    #[error("corpus contains no sentences")]
    EmptyCorpus,
    #[error("sentence must contain at least one token")]
    EmptySentence,
    #[error("token is missing a gold language label")]
    UnlabeledToken,
    #[error("need at least {need} sentences, corpus has {have}")]
    TooFewSentences { have: usize, need: usize },
    #[error("test fraction must lie strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),
    #[error("fold count must be at least 2, got {0}")]
    InvalidFolds(usize),
    #[error("document has no terms")]
    EmptyDocument,
    #[error("vectorizer has not been fitted")]
    NotFitted,
    #[error("token index {index} out of range for sentence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{vectors} vectors but {labels} labels")]
    LengthMismatch { vectors: usize, labels: usize },
    #[error("smoothing constant alpha must be positive, got {0}")]
    NonPositiveAlpha(f64),
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("smoothing constant must be non-negative and finite, got {0}")]
    InvalidSmoothing(f64),
    #[error("sentence of length {len} exceeds the exhaustive-search limit {max}")]
    SentenceTooLong { len: usize, max: usize },
    #[error("invalid probability table: {0}")]
    InvalidProbabilityTable(String),
    #[error("no feature template enabled")]
    NoTemplatesEnabled,
    #[error("objective became non-finite during training")]
    NonFiniteObjective,
    #[error("prediction shape mismatch: {detail}")]
    ShapeMismatch { detail: String },
    #[error("bad magic bytes: not a model file")]
    ModelMagic,
    #[error("unsupported model format version {0}")]
    ModelVersion(u32),
    #[error("model payload failed checksum verification")]
    ModelChecksum,
    #[error("model file truncated")]
    ModelTruncated,
    #[error("malformed model payload: {0}")]
    ModelEncoding(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
