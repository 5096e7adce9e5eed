//! The `.dfd` model format: parser, printer and diagnostics.
//!
//! ```text
//! model "HomeSys" {
//!   boundary Residence { description: "customer premises" }
//!   asset Measurement { sensitivity: high, category: measurement }
//!   entity Sensor in boundary Residence {}
//!   process Gateway in boundary Residence { validates_input: true }
//!   flow f1: Sensor -> Gateway carries Measurement { channel_encrypted: false }
//!   session s1 between Gateway, Sensor { secure_channel: unknown }
//! }
//! ```

pub mod decl;
pub mod diagnostics;
mod lexer;
mod parser;
mod printer;

pub use decl::{Attribute, DeclKind, Declaration, Literal, NameRef, SourceSpan};
pub use diagnostics::{render_diagnostics, Diagnostic, Severity};
pub use parser::{is_reserved, parse, parse_named, RESERVED};
pub use printer::pretty_print;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("expected {expected}, found {found}")]
    UnexpectedToken {
        expected: String,
        found: String,
        span: SourceSpan,
    },
    #[error("unterminated string literal")]
    UnterminatedString { span: SourceSpan },
    #[error("unknown keyword '{word}'")]
    UnknownKeyword { word: String, span: SourceSpan },
}
