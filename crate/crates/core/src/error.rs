use std::fmt;

/// Errors produced by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A construction exceeded one of the configured size guards.
    #[error("{stage}: {what} guard exceeded ({count} > {limit})")]
    Guard {
        stage: String,
        what: &'static str,
        count: usize,
        limit: usize,
    },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl fmt::Display) -> Self {
        Error::InvalidArgument(msg.to_string())
    }

    pub(crate) fn parse(line: usize, msg: impl fmt::Display) -> Self {
        Error::Parse {
            line,
            message: msg.to_string(),
        }
    }

    /// Prefixes the stage of a guard error, leaving other errors untouched.
    pub fn in_stage(self, stage: &str) -> Self {
        match self {
            Error::Guard {
                stage: inner,
                what,
                count,
                limit,
            } => Error::Guard {
                stage: if inner.is_empty() {
                    stage.to_string()
                } else {
                    format!("{stage}/{inner}")
                },
                what,
                count,
                limit,
            },
            other => other,
        }
    }
}
