use std::fmt;

use super::decl::SourceSpan;
use super::ParseError;
use crate::model::ValidationError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

/// A located message ready for rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: SourceSpan,
    pub severity: Severity,
    pub message: String,
}

impl From<&ParseError> for Diagnostic {
    fn from(e: &ParseError) -> Self {
        Diagnostic {
            span: e.span().clone(),
            severity: Severity::Error,
            message: e.to_string(),
        }
    }
}

impl From<&ValidationError> for Diagnostic {
    fn from(e: &ValidationError) -> Self {
        Diagnostic {
            span: e.span().clone(),
            severity: Severity::Error,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.span, self.severity, self.message)
    }
}

/// One `file:line:col: severity: message` line per diagnostic, ordered by
/// position. Diagnostics at the same position keep their input order.
pub fn render_diagnostics<I>(diagnostics: I) -> String
where
    I: IntoIterator,
    I::Item: Into<Diagnostic>,
{
    let mut all: Vec<Diagnostic> = diagnostics.into_iter().map(Into::into).collect();
    all.sort_by(|a, b| {
        (&*a.span.file, a.span.line, a.span.column).cmp(&(&*b.span.file, b.span.line, b.span.column))
    });
    let mut out = String::new();
    for d in all {
        out.push_str(&d.to_string());
        out.push('\n');
    }
    out
}
