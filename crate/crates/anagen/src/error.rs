use std::path::PathBuf;

use thiserror::Error;

/// A syntax error with its 1-based line and byte column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{source_name}:{line}:{column}: {message}")]
pub struct ParseError {
    pub source_name: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    /// An error at byte offset `offset` of a single-line input.
    pub fn at(offset: usize, message: impl Into<String>) -> Self {
        Self { source_name: "<arg>".into(), line: 1, column: offset + 1, message: message.into() }
    }

    /// Moves an error found in a substring to its place in the enclosing text.
    pub fn relocate(mut self, source_name: &str, line: usize, column_offset: usize) -> Self {
        self.source_name = source_name.into();
        self.line = line;
        self.column += column_offset;
        self
    }

    /// Shifts the column of an error found in a substring starting at `offset`.
    pub fn shift(mut self, offset: usize) -> Self {
        self.column += offset;
        self
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] anagen_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }
}
