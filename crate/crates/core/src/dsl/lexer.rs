use std::sync::Arc;

use super::decl::SourceSpan;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    Colon,
    Comma,
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::LBrace => "'{'".to_string(),
            Tok::RBrace => "'}'".to_string(),
            Tok::Colon => "':'".to_string(),
            Tok::Comma => "','".to_string(),
            Tok::Arrow => "'->'".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `text` into tokens. Lexical errors are collected and the
/// offending characters skipped; the token stream always ends with `Eof`.
pub(crate) fn tokenize(file: &Arc<str>, text: &str) -> (Vec<Token>, Vec<ParseError>) {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    let span = |line, column, length| SourceSpan::new(file.clone(), line, column, length);

    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        match c {
            c if c.is_whitespace() => {
                cur.bump();
            }
            '#' => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            }
            '{' | '}' | ':' | ',' => {
                cur.bump();
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ':' => Tok::Colon,
                    _ => Tok::Comma,
                };
                tokens.push(Token {
                    tok,
                    span: span(line, column, 1),
                });
            }
            '-' => {
                cur.bump();
                if cur.peek() == Some('>') {
                    cur.bump();
                    tokens.push(Token {
                        tok: Tok::Arrow,
                        span: span(line, column, 2),
                    });
                } else {
                    errors.push(ParseError::UnexpectedToken {
                        expected: "'->'".into(),
                        found: "'-'".into(),
                        span: span(line, column, 1),
                    });
                }
            }
            '"' => {
                cur.bump();
                let mut value = String::new();
                let mut length = 1;
                let mut closed = false;
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                    length += 1;
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => match cur.peek() {
                            Some(e @ ('"' | '\\' | 'n' | 't')) => {
                                cur.bump();
                                length += 1;
                                value.push(match e {
                                    'n' => '\n',
                                    't' => '\t',
                                    e => e,
                                });
                            }
                            _ => value.push('\\'),
                        },
                        c => value.push(c),
                    }
                }
                if closed {
                    tokens.push(Token {
                        tok: Tok::Str(value),
                        span: span(line, column, length),
                    });
                } else {
                    errors.push(ParseError::UnterminatedString {
                        span: span(line, column, length),
                    });
                }
            }
            c if is_ident_start(c) => {
                let mut word = String::new();
                while let Some(c) = cur.peek().filter(|&c| is_ident_continue(c)) {
                    cur.bump();
                    word.push(c);
                }
                let length = word.len();
                tokens.push(Token {
                    tok: Tok::Ident(word),
                    span: span(line, column, length),
                });
            }
            other => {
                cur.bump();
                errors.push(ParseError::UnexpectedToken {
                    expected: "a token".into(),
                    found: format!("character {other:?}"),
                    span: span(line, column, 1),
                });
            }
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: span(cur.line, cur.column, 0),
    });
    (tokens, errors)
}
