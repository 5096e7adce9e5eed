use std::fmt::Write;

use super::decl::{DeclKind, Declaration, Literal};

/// Serializes declarations back to model text.
///
/// The first `ModelHeader` names the model (an empty name is used if there is
/// none); further headers are dropped. Parsing the output yields the same
/// declarations up to spans.
pub fn pretty_print(decls: &[Declaration]) -> String {
    let name = decls
        .iter()
        .find(|d| d.kind == DeclKind::ModelHeader)
        .map(|d| d.name.as_str())
        .unwrap_or("");
    let mut out = String::new();
    let _ = writeln!(out, "model {} {{", Literal::Str(name.to_string()));
    for d in decls.iter().filter(|d| d.kind != DeclKind::ModelHeader) {
        let _ = write!(out, "  {} {}", d.kind.keyword(), d.name);
        if let Some(b) = &d.boundary {
            let _ = write!(out, " in boundary {}", b.name);
        }
        if let Some((a, b)) = &d.endpoints {
            match d.kind {
                DeclKind::Session => {
                    let _ = write!(out, " between {}, {}", a.name, b.name);
                }
                _ => {
                    let _ = write!(out, ": {} -> {}", a.name, b.name);
                }
            }
        }
        if !d.carries.is_empty() {
            let names: Vec<&str> = d.carries.iter().map(|c| c.name.as_str()).collect();
            let _ = write!(out, " carries {}", names.join(", "));
        }
        if d.attributes.is_empty() {
            out.push_str(" {}\n");
        } else {
            out.push_str(" {\n");
            for a in &d.attributes {
                let _ = writeln!(out, "    {}: {}", a.key, a.value);
            }
            out.push_str("  }\n");
        }
    }
    out.push_str("}\n");
    out
}
