use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed record at line {line_no}: {reason}")]
    MalformedRecord { line_no: u64, reason: String },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("empty document set")]
    EmptyDocuments,

    #[error("invalid lexicon: {0}")]
    InvalidLexicon(String),

    #[error("degenerate training set")]
    DegenerateTrainingSet,

    #[error("class {class} has {count} examples, fewer than {folds} folds")]
    ClassTooSmall {
        class: String,
        count: usize,
        folds: usize,
    },

    #[error("unsupported model version {found} (this build reads version {supported})")]
    ModelVersionMismatch { found: u32, supported: u32 },

    #[error("corrupt model file: {0}")]
    CorruptModel(String),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no polarized users")]
    NoPolarizedUsers,

    #[error("no users joined with bot scores")]
    NoJoinedUsers,

    #[error("no user active in both windows")]
    NoOverlappingUsers,

    #[error("zero variance in input series")]
    ZeroVariance,

    #[error("series length mismatch: {left} vs {right}")]
    SeriesLengthMismatch { left: usize, right: usize },
}

impl Error {
    pub(crate) fn invalid_parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
