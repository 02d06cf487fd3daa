//! Diagnostics shared by the lexer, parser and type checker.

use std::fmt;

use serde::Serialize;

use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Note,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        })
    }
}

/// A located message. Type errors carry the name of the violated rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: Span,
    pub rule: Option<String>,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
            rule: None,
        }
    }

    pub fn rule(span: Span, rule: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
            rule: Some(rule.to_string()),
        }
    }

    pub fn warning(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
            span,
            rule: None,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity[rule]: message`
    pub fn render(&self, file: &str) -> String {
        match &self.rule {
            Some(rule) => format!(
                "{}:{}:{}: {}[{}]: {}",
                file, self.span.line, self.span.col, self.severity, rule, self.message
            ),
            None => format!(
                "{}:{}:{}: {}: {}",
                file, self.span.line, self.span.col, self.severity, self.message
            ),
        }
    }

    pub fn to_json(&self, file: &str) -> DiagnosticJson {
        DiagnosticJson {
            severity: self.severity,
            message: self.message.clone(),
            file: file.to_string(),
            line: self.span.line,
            col: self.span.col,
            rule: self.rule.clone(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("<input>"))
    }
}

impl std::error::Error for Diagnostic {}

/// Wire form of a diagnostic.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticJson {
    pub severity: Severity,
    pub message: String,
    pub file: String,
    pub line: u32,
    pub col: u32,
    pub rule: Option<String>,
}
