use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised across the crate. Messages are prefixed with the module
/// that produced them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("infotheory: no observations")]
    EmptyInput,
    #[error("infotheory: row {row} has {found} values, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("infotheory: unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("infotheory: variable `{0}` listed more than once")]
    DuplicateVariable(String),
    #[error("infotheory: subset needs at least {required} variables, got {found}")]
    SubsetTooSmall { required: usize, found: usize },
    #[error("infotheory: invalid probability table: {0}")]
    InvalidTable(String),
    #[error("infotheory: window of {window} samples exceeds stream of {len}")]
    WindowTooLong { window: usize, len: usize },
    #[error("infotheory: window of {window} samples is below the minimum of {minimum}")]
    WindowTooShort { window: usize, minimum: usize },
    #[error("infotheory: invalid argument: {0}")]
    InvalidArgument(String),

    #[error("models: invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("models: grid too small for stencils: {0}")]
    GridTooSmall(String),
    #[error("models: grid is not uniform: {0}")]
    NonUniformGrid(String),

    #[error("fit: invalid time series: {0}")]
    InvalidSeries(String),
    #[error("fit: series too short: {0}")]
    SeriesTooShort(String),
    #[error("fit: series contains non-finite values")]
    NonFinite,
    #[error("fit: zero variance in regressor")]
    ZeroVariance,
    #[error("fit: singular system: {0}")]
    Singular(String),

    #[error("lcwt: unsupported wavelet order {0} (supported: 2, 3)")]
    UnsupportedOrder(u32),
    #[error("lcwt: invalid scale grid: {0}")]
    InvalidScales(String),
    #[error("lcwt: scalogram is identically zero")]
    ZeroScalogram,

    #[error("stats: {0}")]
    Stats(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
