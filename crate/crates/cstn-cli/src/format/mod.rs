//! Text formats: networks, strategies, quantified formulas, and graph
//! export. All are line-oriented UTF-8 with `#` comments; each parser
//! reports line-numbered diagnostics, and each printer emits canonical text
//! that parses back to an equal value.

pub mod dot;
pub mod network;
pub mod q3sat;
pub mod strategy;

use std::error::Error;
use std::fmt;

/// A parse failure at a specific line (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub fn new(line: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl Error for FormatError {}

/// Strips a `#` comment and splits the rest on whitespace.
fn tokenize(raw: &str) -> Vec<&str> {
    let code = raw.split('#').next().unwrap_or("");
    code.split_whitespace().collect()
}

/// Checks the `[A-Za-z0-9_]+` shape shared by task and proposition names.
fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}
