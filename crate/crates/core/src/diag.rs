//! Diagnostics and source positions shared by every pass.

use std::fmt;

use serde::Serialize;

/// A position in the source text a node was parsed from.
///
/// Positions never take part in equality or hashing: two documents are equal
/// when their content is, wherever it came from.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SourcePos {
    /// Byte offset into the UTF-8 source.
    pub offset: usize,
    /// 1-based line.
    pub line: u32,
    /// 1-based column, counted in characters.
    pub column: u32,
}

impl SourcePos {
    pub fn new(offset: usize, line: u32, column: u32) -> Self {
        SourcePos {
            offset,
            line,
            column,
        }
    }
}

impl PartialEq for SourcePos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for SourcePos {}

impl std::hash::Hash for SourcePos {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub location: SourcePos,
}

impl Diagnostic {
    pub fn error(code: &'static str, message: impl Into<String>, location: SourcePos) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            location,
        }
    }

    pub fn warning(code: &'static str, message: impl Into<String>, location: SourcePos) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            location,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Line-oriented form: `severity code line:col message`.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.severity, self.code, self.location, self.message
        )
    }
}
