use crate::model::Orientation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("sequence {id}: no events")]
    EmptySequence { id: String },

    #[error("sequence {id}: two events share timestamp {time}")]
    DuplicateTimestamp { id: String, time: i64 },

    #[error("sequence {id}: negative timestamp {time}")]
    NegativeTimestamp { id: String, time: i64 },

    #[error("invalid item token {0:?}")]
    InvalidItem(String),

    #[error("itemset must contain at least one item")]
    EmptyItemset,

    #[error("invalid time range [{lo},{hi}]: need 0 < lo <= hi")]
    InvalidTimeRange { lo: i64, hi: i64 },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("duplicate sequence id {0}")]
    DuplicateSequenceId(String),

    #[error("dataset has no sequences")]
    EmptyDataset,

    #[error("dataset mixes original and reversed sequences")]
    MixedOrientation,

    #[error("expected {expected:?} orientation, found {found:?}")]
    WrongOrientation {
        expected: Orientation,
        found: Orientation,
    },

    #[error("no sequence contains the target itemset {0}")]
    EmptyResult(String),

    #[error("sequence {id}: target itemset not present")]
    TargetAbsent { id: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: u64,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by the input data rather than by how the
    /// library was called.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::InvalidConfig(_))
    }
}
