use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value fell outside the domain an operation accepts.
    #[error("input out of range: {0}")]
    InputRange(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid annotation: {0}")]
    Annotation(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("measurement error: {0}")]
    Measurement(String),

    #[error("ranking error: {0}")]
    Ranking(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    /// Every failed invariant found while validating a manifest.
    #[error("validation failed with {} problem(s):\n  {}", .0.len(), .0.join("\n  "))]
    Validation(Vec<String>),

    #[error("image error for {path}: {message}")]
    Image { path: PathBuf, message: String },

    #[error("I/O error for {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("perceptual backend error: {0}")]
    Backend(String),

    #[error("config error: {0}")]
    Config(String),

    /// The metric is undefined for this input; not a failure.
    #[error("metric absent: {0}")]
    MetricAbsent(crate::metrics::SkipReason),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn image(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Image {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
