use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed JSON. `offset` is the byte offset within the parsed text.
    #[error("{context}: malformed JSON at byte {offset}: {message}")]
    Json {
        context: String,
        offset: usize,
        message: String,
    },

    #[error("{context}: schema error: {message}")]
    Schema { context: String, message: String },

    /// Cross-file consistency problems such as dangling or duplicate ids.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("{path}:{line}: {message}")]
    Format { path: String, line: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("readability is undefined for text without words or sentences")]
    UndefinedReadability,

    #[error("training diverged at epoch {epoch}: loss is {loss}")]
    Diverged { epoch: usize, loss: f64 },

    #[error("optimizer did not converge after {iterations} iterations (gradient norm {grad_norm:e})")]
    NotConverged { iterations: usize, grad_norm: f64 },

    #[error("information matrix is singular; increase the L2 penalty")]
    SingularInformation,

    #[error("unsupported model file: {0}")]
    Model(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            context: context.into(),
            message: message.into(),
        }
    }

    pub(crate) fn from_json(context: impl Into<String>, text: &str, err: &serde_json::Error) -> Self {
        // serde_json reports 1-based line/column; convert to a byte offset.
        let offset = text
            .split_inclusive('\n')
            .take(err.line().saturating_sub(1))
            .map(str::len)
            .sum::<usize>()
            + err.column().saturating_sub(1);
        Error::Json {
            context: context.into(),
            offset: offset.min(text.len()),
            message: err.to_string(),
        }
    }

    /// Errors caused by bad user input rather than by a defect or a numeric
    /// failure. The CLI maps these to exit status 1.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Diverged { .. } | Error::NotConverged { .. } | Error::SingularInformation
        )
    }
}
