use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("unbalanced brackets at token {0}")]
    UnbalancedBrackets(usize),
    #[error("label `{0}` must start with `in:` or `sl:`")]
    BadLabelPrefix(String),
    #[error("label has an empty name at token {0}")]
    EmptyLabelName(usize),
    #[error("text `{0}` appears directly under an intent")]
    TextUnderIntent(String),
    #[error("root node must be an intent, found `{0}`")]
    RootNotIntent(String),
    #[error("unexpected input after the root node closes at token {0}")]
    TrailingInput(usize),
    #[error("malformed utterance leaf `{0}`")]
    MalformedLeaf(String),
    #[error("placeholder is not allowed here: {0}")]
    UnexpectedPlaceholder(String),

    #[error("invalid attach position: node {node}, child index {index}")]
    InvalidAttachPosition { node: usize, index: usize },
    #[error("component is empty or not connected in the skeleton")]
    DisconnectedComponent,
    #[error("unit {0} arrived but the partial tree has no open placeholder")]
    NoOpenPlaceholder(usize),
    #[error("units exhausted with {0} placeholder(s) unfilled")]
    UnfilledPlaceholders(usize),
    #[error("partition does not reassemble to the skeleton")]
    InvalidPartition,

    #[error("skeleton has {nodes} nodes, limit is {limit}")]
    SkeletonTooLarge { nodes: usize, limit: usize },
    #[error("skeleton cannot be covered by in-vocabulary units")]
    OovSkeleton,
    #[error("sampling coefficient must be positive and finite, got {0}")]
    InvalidTheta(f64),

    #[error("vocabulary phase is {found}, expected {expected}")]
    PhaseMismatch { expected: String, found: String },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("vocabulary is empty")]
    EmptyVocabulary,
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("io error: {0}")]
    Io(String),
    #[error("line {line}: {message}")]
    ParseErrorAtLine { line: usize, message: String },
    #[error("corrupt vocabulary file: {0}")]
    CorruptVocabFile(String),
}

impl Error {
    pub(crate) fn at_line(line: usize, err: impl std::fmt::Display) -> Self {
        Error::ParseErrorAtLine {
            line,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
