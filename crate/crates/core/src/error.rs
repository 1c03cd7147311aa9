use thiserror::Error;

/// Coarse error category, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Invalid configuration or parameter value.
    Config,
    /// Invalid or unusable input data.
    Data,
    /// Anything else (I/O, serialization, internal contract breaches).
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("constant variable '{0}': degenerate domain, drop it before partitioning")]
    ConstantVariable(String),

    #[error("constant target: all effort values are equal")]
    ConstantTarget,

    #[error("number of fuzzy sets must be in 2..=7, got {0}")]
    InvalidSetCount(usize),

    #[error("number of output classes must be in 2..=7, got {0}")]
    InvalidClassCount(usize),

    #[error("significance level must be in [0, 1], got {0}")]
    InvalidBeta(f64),

    #[error("min node weight must be > 0, got {0}")]
    InvalidMinNodeWeight(f64),

    #[error("train fraction must be in (0, 1), got {0}")]
    InvalidTrainFraction(f64),

    #[error("t-norm argument {0} outside [0, 1]")]
    DegreeOutOfRange(f64),

    #[error("invalid fuzzy partition for '{variable}': {reason}")]
    InvalidPartition { variable: String, reason: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("no partition covers variable '{0}'")]
    UnpartitionedVariable(String),

    #[error("record {record} has no value for attribute '{attribute}'")]
    MissingAttribute { record: usize, attribute: String },

    #[error("input has no value for attribute '{0}'")]
    MissingInput(String),

    #[error("column '{0}' required by the schema is missing from the CSV header")]
    MissingColumn(String),

    #[error("row {row}, column '{column}': invalid numeric value '{value}'")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: effort must be > 0, got {value}")]
    NonPositiveEffort { row: usize, value: f64 },

    #[error("CSV file has no data rows")]
    EmptyFile,

    #[error("actual effort must be > 0, got {0}")]
    NonPositiveActual(f64),

    #[error("metric requires at least one (actual, estimated) pair")]
    EmptyPairs,

    #[error("split of {n} records at fraction {fraction} would leave an empty part")]
    DegenerateSplit { n: usize, fraction: f64 },

    #[error("synthetic generator needs n >= 2, got {0}")]
    GeneratorTooSmall(usize),

    #[error("input file '{0}' does not exist")]
    InputFileMissing(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("model file error: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InvalidSetCount(_) | InvalidClassCount(_) | InvalidBeta(_)
            | InvalidMinNodeWeight(_) | InvalidTrainFraction(_) => ErrorKind::Config,
            ConstantVariable(_) | ConstantTarget | EmptyDataset | UnpartitionedVariable(_)
            | MissingAttribute { .. } | MissingInput(_) | MissingColumn(_) | NonNumericCell { .. }
            | NonPositiveEffort { .. } | EmptyFile | NonPositiveActual(_) | EmptyPairs
            | DegenerateSplit { .. } | GeneratorTooSmall(_) | InputFileMissing(_) | Schema(_)
            | Model(_) => ErrorKind::Data,
            DegreeOutOfRange(_) | InvalidPartition { .. } | Io(_) | Csv(_) => ErrorKind::Internal,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
