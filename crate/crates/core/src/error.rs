use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed channel document: {0}")]
    Malformed(String),

    #[error("non-rectangular matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },

    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid level {value:?} at row {row}, column {col}")]
    InvalidLevel { row: usize, col: usize, value: String },

    #[error("need at least {required} transmitters, got {found}")]
    TooFewTransmitters { required: usize, found: usize },

    #[error("need at least one receiver")]
    NoReceivers,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("operation requires {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("subset {0:#b} is not a nonempty proper subset")]
    InvalidSubset(u64),

    #[error("constraint key sets differ")]
    KeyMismatch,

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("strategy error: {0}")]
    Strategy(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
