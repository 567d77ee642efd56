use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot open {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("missing label column {0:?}")]
    MissingLabelColumn(String),

    #[error("non-numeric cell {value:?} at row {row}, column {column:?}")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("non-finite value at row {row}, column {column:?}")]
    NonFinite { row: usize, column: String },

    #[error("row {row} has {found} fields, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("single-class dataset: every instance is labeled {0:?}")]
    SingleClass(String),

    #[error("label column has more than two distinct values: {0:?}")]
    TooManyClasses(Vec<String>),

    #[error("unknown label {0:?}, model knows {1:?} and {2:?}")]
    UnknownLabel(String, String, String),

    #[error("at least one feature column is required")]
    NoVariables,

    #[error("n ≥ {required} required, got {found} rows")]
    TooFewInstances { required: usize, found: usize },

    #[error("split mode needs at least 4 instances, got {0}")]
    SplitTooSmall(usize),

    #[error("degenerate split: subset {0} contains a single class")]
    DegenerateSplit(char),

    #[error("width mismatch: model expects {expected} variables, input has {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("no features")]
    NoFeatures,

    #[error("table too large: pool has {0} features, at most 20 supported")]
    TableTooLarge(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported model format version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("invalid model: {0}")]
    Model(String),
}

impl Error {
    /// Process exit code for the CLI: 2 data, 4 I/O.
    ///
    /// Code 3 is reserved for a synthesis that stalled with errors left; that
    /// is a diagnostic on a successful run, not an `Error`.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 4,
            _ => 2,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Csv(err.to_string())
    }
}
