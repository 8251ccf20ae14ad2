use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single validation problem found while reading a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    /// 1-based line in the source text (the header is line 1), when known.
    pub line: Option<usize>,
    pub message: String,
}

impl Issue {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        Issue {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn general(message: impl Into<String>) -> Self {
        Issue {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn join_issues(issues: &[Issue]) -> String {
    issues
        .iter()
        .map(Issue::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("negative citation count {value} at index {index}")]
    NegativeCount { index: usize, value: i64 },

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("invalid window {0}: must be at least 1")]
    InvalidWindow(i64),

    /// Every problem found in one input, reported together.
    #[error("{source_name}: {}", join_issues(.issues))]
    Invalid {
        source_name: String,
        issues: Vec<Issue>,
    },

    #[error("unresolved cited paper ids: {}", .0.join(", "))]
    DanglingIds(Vec<String>),

    #[error("{}", .0.join("; "))]
    InconsistentEvents(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(source_name: &str, issues: Vec<Issue>) -> Self {
        Error::Invalid {
            source_name: source_name.to_string(),
            issues,
        }
    }
}
