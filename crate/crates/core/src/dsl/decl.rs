//! Raw declarations produced by the parser and consumed by model validation.

use std::fmt;
use std::sync::Arc;

/// Location of a token in a source file. Lines and columns are 1-based and
/// counted in characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(file: Arc<str>, line: usize, column: usize, length: usize) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        SourceSpan {
            file,
            line,
            column,
            length,
        }
    }

    /// Span used for declarations built in code rather than parsed.
    pub fn synthetic() -> Self {
        SourceSpan::new(Arc::from("<builder>"), 1, 1, 0)
    }
}

impl Default for SourceSpan {
    fn default() -> Self {
        SourceSpan::synthetic()
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeclKind {
    ModelHeader,
    Entity,
    Process,
    Store,
    Boundary,
    Asset,
    Flow,
    Session,
}

impl DeclKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DeclKind::ModelHeader => "model",
            DeclKind::Entity => "entity",
            DeclKind::Process => "process",
            DeclKind::Store => "store",
            DeclKind::Boundary => "boundary",
            DeclKind::Asset => "asset",
            DeclKind::Flow => "flow",
            DeclKind::Session => "session",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "model" => DeclKind::ModelHeader,
            "entity" => DeclKind::Entity,
            "process" => DeclKind::Process,
            "store" => DeclKind::Store,
            "boundary" => DeclKind::Boundary,
            "asset" => DeclKind::Asset,
            "flow" => DeclKind::Flow,
            "session" => DeclKind::Session,
            _ => return None,
        })
    }

    pub fn is_element(self) -> bool {
        matches!(self, DeclKind::Entity | DeclKind::Process | DeclKind::Store)
    }
}

/// Attribute value as written in the source.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Bool(bool),
    Unknown,
    Ident(String),
    Str(String),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Bool(b) => write!(f, "{b}"),
            Literal::Unknown => f.write_str("unknown"),
            Literal::Ident(s) => f.write_str(s),
            Literal::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

/// A name used to point at another declaration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NameRef {
    pub name: String,
    pub span: SourceSpan,
}

impl NameRef {
    pub fn new(name: impl Into<String>, span: SourceSpan) -> Self {
        NameRef {
            name: name.into(),
            span,
        }
    }

    pub fn synthetic(name: impl Into<String>) -> Self {
        NameRef::new(name, SourceSpan::synthetic())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Attribute {
    pub key: String,
    pub value: Literal,
    pub span: SourceSpan,
}

/// One statement of a model file.
///
/// `span` points at the declared name. `boundary` is only meaningful for
/// elements, `endpoints` for flows (source, target) and sessions, and
/// `carries` for flows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Declaration {
    pub kind: DeclKind,
    pub name: String,
    pub span: SourceSpan,
    pub boundary: Option<NameRef>,
    pub endpoints: Option<(NameRef, NameRef)>,
    pub carries: Vec<NameRef>,
    pub attributes: Vec<Attribute>,
}

impl Declaration {
    pub fn new(kind: DeclKind, name: impl Into<String>) -> Self {
        Declaration {
            kind,
            name: name.into(),
            span: SourceSpan::synthetic(),
            boundary: None,
            endpoints: None,
            carries: Vec::new(),
            attributes: Vec::new(),
        }
    }

    pub fn in_boundary(mut self, boundary: impl Into<String>) -> Self {
        self.boundary = Some(NameRef::synthetic(boundary));
        self
    }

    pub fn between(mut self, a: impl Into<String>, b: impl Into<String>) -> Self {
        self.endpoints = Some((NameRef::synthetic(a), NameRef::synthetic(b)));
        self
    }

    pub fn carrying<I, S>(mut self, assets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.carries
            .extend(assets.into_iter().map(NameRef::synthetic));
        self
    }

    pub fn attr(mut self, key: impl Into<String>, value: Literal) -> Self {
        self.attributes.push(Attribute {
            key: key.into(),
            value,
            span: SourceSpan::synthetic(),
        });
        self
    }

    pub fn attribute(&self, key: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.key == key)
    }

    /// Copy with every span replaced by the synthetic span, for comparing
    /// declarations that came from different sources.
    pub fn without_spans(&self) -> Self {
        let clear = |r: &NameRef| NameRef::synthetic(r.name.clone());
        Declaration {
            kind: self.kind,
            name: self.name.clone(),
            span: SourceSpan::synthetic(),
            boundary: self.boundary.as_ref().map(clear),
            endpoints: self.endpoints.as_ref().map(|(a, b)| (clear(a), clear(b))),
            carries: self.carries.iter().map(clear).collect(),
            attributes: self
                .attributes
                .iter()
                .map(|a| Attribute {
                    key: a.key.clone(),
                    value: a.value.clone(),
                    span: SourceSpan::synthetic(),
                })
                .collect(),
        }
    }
}
