//! Errors raised while parsing, instantiating, or checking table documents.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Eval(String),
    #[error("inadmissible q: {0}")]
    BadQ(String),
    #[error("document error: {0}")]
    Document(String),
    #[error("in {context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<TableError>,
    },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Cyclo(#[from] cyclo::CycloError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl TableError {
    /// Wrap with a location description such as the set and field at fault.
    #[must_use]
    pub fn in_context(self, context: impl Into<String>) -> Self {
        TableError::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

/// Extension for attaching document locations to fallible operations.
pub trait Located<T> {
    fn located(self, context: impl Into<String>) -> Result<T, TableError>;
}

impl<T, E: Into<TableError>> Located<T> for Result<T, E> {
    fn located(self, context: impl Into<String>) -> Result<T, TableError> {
        self.map_err(|e| e.into().in_context(context))
    }
}
