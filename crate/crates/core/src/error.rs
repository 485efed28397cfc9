use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error at line {line}: {message}")]
    Validation { line: usize, message: String },

    #[error("update error: {0}")]
    Update(String),

    #[error("sequencing error: expected version {expected}, got {found}")]
    Sequencing { expected: u64, found: u64 },

    #[error("workload generation error: {0}")]
    Workload(String),

    #[error("query compilation error: {0}")]
    QueryCompile(String),

    #[error("nontermination: iteration cap {cap} exceeded")]
    NonTermination { cap: u32 },

    #[error("selection error: {0}")]
    Selection(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
