use std::sync::Arc;

use super::decl::{Attribute, DeclKind, Declaration, Literal, NameRef, SourceSpan};
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;

/// Words that cannot be used as names.
pub const RESERVED: &[&str] = &[
    "model", "entity", "process", "store", "boundary", "asset", "flow", "session", "in",
    "carries", "between", "true", "false", "unknown",
];

pub fn is_reserved(word: &str) -> bool {
    RESERVED.contains(&word)
}

/// Parses a model file, reporting errors against the placeholder file name
/// `<input>`.
pub fn parse(text: &str) -> Result<Vec<Declaration>, Vec<ParseError>> {
    parse_named("<input>", text)
}

pub fn parse_named(file: &str, text: &str) -> Result<Vec<Declaration>, Vec<ParseError>> {
    let file: Arc<str> = Arc::from(file);
    let (tokens, mut errors) = tokenize(&file, text);
    let mut parser = Parser {
        tokens,
        pos: 0,
        in_block: false,
        decls: Vec::new(),
        errors: Vec::new(),
    };
    parser.file();
    errors.append(&mut parser.errors);
    if errors.is_empty() {
        Ok(parser.decls)
    } else {
        errors.sort_by_key(|e| (e.span().line, e.span().column));
        Err(errors)
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    in_block: bool,
    decls: Vec<Declaration>,
    errors: Vec<ParseError>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError::UnexpectedToken {
            expected: expected.to_string(),
            found: t.tok.describe(),
            span: t.span.clone(),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn expect_word(&mut self, word: &str) -> PResult<Token> {
        match &self.peek().tok {
            Tok::Ident(w) if w == word => Ok(self.bump()),
            _ => Err(self.unexpected(&format!("'{word}'"))),
        }
    }

    fn at_word(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(w) if w == word)
    }

    fn name(&mut self, what: &str) -> PResult<NameRef> {
        match &self.peek().tok {
            Tok::Ident(w) if !is_reserved(w) => {
                let t = self.bump();
                let Tok::Ident(w) = t.tok else { unreachable!() };
                Ok(NameRef::new(w, t.span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn file(&mut self) {
        let header = (|| {
            self.expect_word("model")?;
            let t = self.peek().clone();
            let Tok::Str(name) = t.tok else {
                return Err(self.unexpected("model name string"));
            };
            self.bump();
            self.expect(Tok::LBrace)?;
            Ok(Declaration {
                span: t.span,
                ..Declaration::new(DeclKind::ModelHeader, name)
            })
        })();
        match header {
            Ok(d) => self.decls.push(d),
            Err(e) => {
                self.errors.push(e);
                return;
            }
        }

        loop {
            let t = self.peek().clone();
            let result = match &t.tok {
                Tok::RBrace => {
                    self.bump();
                    break;
                }
                Tok::Eof => {
                    self.errors.push(self.unexpected("'}'"));
                    return;
                }
                Tok::Ident(w) => match DeclKind::from_keyword(w) {
                    Some(kind) if kind != DeclKind::ModelHeader => {
                        self.bump();
                        self.statement(kind)
                    }
                    _ => Err(ParseError::UnknownKeyword {
                        word: w.clone(),
                        span: t.span.clone(),
                    }),
                },
                _ => Err(self.unexpected("a statement keyword")),
            };
            match result {
                Ok(d) => self.decls.push(d),
                Err(e) => {
                    self.errors.push(e);
                    self.recover();
                }
            }
        }
        if self.peek().tok != Tok::Eof {
            self.errors.push(self.unexpected("end of input"));
        }
    }

    /// Skips to the next statement boundary.
    fn recover(&mut self) {
        if std::mem::take(&mut self.in_block) {
            loop {
                match self.peek().tok {
                    Tok::RBrace => {
                        self.bump();
                        return;
                    }
                    Tok::Eof => return,
                    _ => {
                        self.bump();
                    }
                }
            }
        }
        // Always make progress past the offending token.
        if !self.at_statement_start() {
            self.bump();
        }
        let mut depth = 0usize;
        loop {
            match &self.peek().tok {
                Tok::Eof => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace if depth == 0 => return,
                Tok::RBrace => depth -= 1,
                _ if depth == 0 && self.at_statement_start() => return,
                _ => {}
            }
            self.bump();
        }
    }

    fn at_statement_start(&self) -> bool {
        match &self.peek().tok {
            Tok::Ident(w) => matches!(DeclKind::from_keyword(w), Some(k) if k != DeclKind::ModelHeader),
            Tok::RBrace | Tok::Eof => true,
            _ => false,
        }
    }

    fn statement(&mut self, kind: DeclKind) -> PResult<Declaration> {
        let name = self.name(&format!("{} name", kind.keyword()))?;
        let mut decl = Declaration {
            span: name.span.clone(),
            ..Declaration::new(kind, name.name)
        };
        match kind {
            DeclKind::Entity | DeclKind::Process | DeclKind::Store => {
                if self.at_word("in") {
                    self.bump();
                    self.expect_word("boundary")?;
                    decl.boundary = Some(self.name("boundary name")?);
                }
            }
            DeclKind::Flow => {
                self.expect(Tok::Colon)?;
                let src = self.name("source element name")?;
                self.expect(Tok::Arrow)?;
                let dst = self.name("target element name")?;
                decl.endpoints = Some((src, dst));
                if self.at_word("carries") {
                    self.bump();
                    decl.carries.push(self.name("asset name")?);
                    while self.peek().tok == Tok::Comma {
                        self.bump();
                        decl.carries.push(self.name("asset name")?);
                    }
                }
            }
            DeclKind::Session => {
                self.expect_word("between")?;
                let a = self.name("endpoint element name")?;
                self.expect(Tok::Comma)?;
                let b = self.name("endpoint element name")?;
                decl.endpoints = Some((a, b));
            }
            DeclKind::Boundary | DeclKind::Asset | DeclKind::ModelHeader => {}
        }
        if self.peek().tok == Tok::LBrace {
            decl.attributes = self.block()?;
        } else if !self.at_statement_start() {
            return Err(self.unexpected("'{' or the next statement"));
        }
        Ok(decl)
    }

    fn block(&mut self) -> PResult<Vec<Attribute>> {
        self.expect(Tok::LBrace)?;
        self.in_block = true;
        let mut attrs = Vec::new();
        loop {
            match &self.peek().tok {
                Tok::RBrace => {
                    self.bump();
                    break;
                }
                Tok::Ident(w) if !is_reserved(w) => {
                    let key = self.bump();
                    let Tok::Ident(key_name) = key.tok else { unreachable!() };
                    self.expect(Tok::Colon)?;
                    let value = self.literal()?;
                    attrs.push(Attribute {
                        key: key_name,
                        value,
                        span: key.span,
                    });
                    if self.peek().tok == Tok::Comma {
                        self.bump();
                    }
                }
                _ => return Err(self.unexpected("attribute name or '}'")),
            }
        }
        self.in_block = false;
        Ok(attrs)
    }

    fn literal(&mut self) -> PResult<Literal> {
        let value = match &self.peek().tok {
            Tok::Ident(w) => match w.as_str() {
                "true" => Literal::Bool(true),
                "false" => Literal::Bool(false),
                "unknown" => Literal::Unknown,
                w if is_reserved(w) => return Err(self.unexpected("a value")),
                w => Literal::Ident(w.to_string()),
            },
            Tok::Str(s) => Literal::Str(s.clone()),
            _ => return Err(self.unexpected("a value")),
        };
        self.bump();
        Ok(value)
    }
}

impl ParseError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            ParseError::UnexpectedToken { span, .. }
            | ParseError::UnterminatedString { span }
            | ParseError::UnknownKeyword { span, .. } => span,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"model "M" { entity Sensor {} process Gateway in boundary Residence {} flow f1: Sensor -> Gateway carries Measurement { channel_encrypted: false } asset Measurement { sensitivity: high } boundary Residence {} }"#;

    #[test]
    fn sample_has_six_declarations() {
        let d = parse(SAMPLE).unwrap();
        assert_eq!(d.len(), 6);
        let kinds: Vec<DeclKind> = d.iter().map(|d| d.kind).collect();
        assert_eq!(
            kinds,
            [
                DeclKind::ModelHeader,
                DeclKind::Entity,
                DeclKind::Process,
                DeclKind::Flow,
                DeclKind::Asset,
                DeclKind::Boundary
            ]
        );
        assert_eq!(d[2].boundary.as_ref().unwrap().name, "Residence");
        let (s, t) = d[3].endpoints.as_ref().unwrap();
        assert_eq!((s.name.as_str(), t.name.as_str()), ("Sensor", "Gateway"));
        assert_eq!(d[3].carries[0].name, "Measurement");
        assert_eq!(d[3].attributes[0].value, Literal::Bool(false));
        assert_eq!(d[4].attributes[0].value, Literal::Ident("high".into()));
    }

    #[test]
    fn empty_input_wants_header_at_origin() {
        let errs = parse("").unwrap_err();
        assert_eq!(errs.len(), 1);
        let ParseError::UnexpectedToken { span, .. } = &errs[0] else {
            panic!("{errs:?}")
        };
        assert_eq!((span.line, span.column), (1, 1));
    }

    #[test]
    fn truncated_flow() {
        let errs = parse("model \"M\" {\n  flow f1: A -> \n}\n").unwrap_err();
        assert_eq!(errs.len(), 1);
        let ParseError::UnexpectedToken { span, found, .. } = &errs[0] else {
            panic!("{errs:?}")
        };
        assert_eq!(found, "'}'");
        assert_eq!((span.line, span.column), (3, 1));

        let errs = parse("model \"M\" {\n  flow f1: A -> ").unwrap_err();
        assert_eq!(errs[0].span().line, 2);
        assert_eq!(errs[0].span().column, 17);
    }

    #[test]
    fn recovers_and_reports_several() {
        let text = "model \"M\" {\n  proces P {}\n  entity E { a: }\n  flow f: E -> P\n  store S { x: \"open\n}\n";
        let errs = parse(text).unwrap_err();
        assert!(matches!(&errs[0], ParseError::UnknownKeyword { word, .. } if word == "proces"));
        assert!(matches!(&errs[1], ParseError::UnexpectedToken { .. }));
        assert_eq!(errs[1].span().line, 3);
        assert!(errs
            .iter()
            .any(|e| matches!(e, ParseError::UnterminatedString { span } if span.line == 5)));
    }

    #[test]
    fn comments_crlf_and_sessions() {
        let text = "# header\r\nmodel \"M\" { # trailing\r\n  session s between A, B { secure_channel: unknown, timeout_set: true }\r\n}\r\n";
        let d = parse(text).unwrap();
        assert_eq!(d[1].kind, DeclKind::Session);
        assert_eq!(d[1].attributes.len(), 2);
        assert_eq!(d[1].attributes[0].value, Literal::Unknown);
        assert_eq!(d[1].span.line, 3);
    }

    #[test]
    fn string_escapes() {
        let d = parse(r#"model "a\"b" { boundary B { description: "x\\y\n" } }"#).unwrap();
        assert_eq!(d[0].name, "a\"b");
        assert_eq!(d[1].attributes[0].value, Literal::Str("x\\y\n".into()));
    }

    #[test]
    fn trailing_garbage() {
        let errs = parse("model \"M\" {} entity").unwrap_err();
        assert_eq!(errs.len(), 1);
    }
}
