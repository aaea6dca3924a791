//! File formats and the `cxp` command-line driver on top of `cxp-core`.

use std::fmt;

pub mod cli;
pub mod formats;

/// A problem with input data, located by source name and, when known, line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataError {
    pub source: String,
    pub line: Option<u64>,
    pub message: String,
}

impl DataError {
    pub fn new(source: &str, line: Option<u64>, message: impl fmt::Display) -> Self {
        DataError {
            source: source.into(),
            line,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.source, l, self.message),
            None => write!(f, "{}: {}", self.source, self.message),
        }
    }
}

impl std::error::Error for DataError {}
