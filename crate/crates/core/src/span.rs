//! Source locations.
//!
//! Spans never participate in structural equality or hashing: two AST nodes
//! that differ only in where they were parsed from compare equal.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

/// A 1-based line/column position plus a byte offset range.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(line: u32, col: u32, start: usize, end: usize) -> Self {
        Span {
            line,
            col,
            start,
            end,
        }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: Span) -> Span {
        if other.end <= self.start && other.start < self.start {
            return other.to(self);
        }
        Span {
            line: self.line,
            col: self.col,
            start: self.start,
            end: self.end.max(other.end),
        }
    }
}

impl PartialEq for Span {
    fn eq(&self, _other: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl Hash for Span {
    fn hash<H: Hasher>(&self, _state: &mut H) {}
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}
