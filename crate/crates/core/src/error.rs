use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("non-positive excess price at t={index}")]
    NonPositiveExcess { index: i64 },

    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("regressor has zero variance")]
    DegenerateRegressor,

    #[error("window [{start}, {end}] lies outside the series [{first}, {last}]")]
    WindowOutOfRange {
        start: i64,
        end: i64,
        first: i64,
        last: i64,
    },

    #[error("iteration diverged after t={last_finite}")]
    FiniteHorizonSingularity { last_finite: usize },

    #[error("expected {expected} forecasts, got {got}")]
    WrongForecastCount { expected: usize, got: usize },

    #[error("insufficient history: need {needed} prices, have {got}")]
    InsufficientHistory { needed: usize, got: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("grid has no valid cells")]
    NoValidCells,

    #[error("line {line}: {msg}")]
    Malformed { line: u64, msg: String },

    #[error("line {line}: time index {found} does not follow {expected_prev}")]
    NonContiguous {
        line: u64,
        expected_prev: i64,
        found: i64,
    },

    #[error("line {line}: price {value} outside [{min}, {max}]")]
    OutOfRange {
        line: u64,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether this error came from reading or parsing input data.
    pub fn is_ingestion(&self) -> bool {
        matches!(
            self,
            Error::Malformed { .. }
                | Error::NonContiguous { .. }
                | Error::OutOfRange { .. }
                | Error::Io { .. }
                | Error::Csv(_)
        )
    }
}
