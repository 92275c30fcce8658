use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the mask pipeline and evaluation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The file exists but is not a mask we accept (corrupt data, bad magic,
    /// unsupported bit depth or channel layout).
    #[error("{path}: {message}")]
    Decode { path: PathBuf, message: String },

    #[error("invalid mask{}: {message}", image_id.as_deref().map(|id| format!(" `{id}`")).unwrap_or_default())]
    InvalidMask {
        image_id: Option<String>,
        message: String,
    },

    #[error("template {branch}[{index}]: {message}")]
    Template {
        branch: &'static str,
        index: usize,
        message: String,
    },

    #[error("template set: {0}")]
    TemplateSchema(String),

    #[error("no {branch} templates in family {family} for {count} lake(s)")]
    BranchMismatch {
        family: String,
        branch: &'static str,
        count: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("infeasible corpus spec: {0}")]
    InfeasibleSpec(String),

    #[error("duplicate claim ordinal {0}")]
    DuplicateOrdinal(u32),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn decode(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Decode {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True when the failure is an I/O-level problem rather than invalid input.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
