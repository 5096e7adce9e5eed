//! On-disk schema and the checks that turn it into a [`Catalog`].

use std::collections::HashSet;

use serde::Deserialize;

use super::spec::*;
use super::{Catalog, CatalogVersion, FlawDefinition, IdMapping};
use crate::model::AnnotationKey;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    version: String,
    #[serde(default)]
    flaw: Vec<RawFlaw>,
    #[serde(default)]
    mapping: Vec<RawMapping>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlaw {
    id: u32,
    name: String,
    description: String,
    #[serde(default)]
    cwe: Vec<u32>,
    #[serde(default = "default_true")]
    applicable: bool,
    note: Option<String>,
    #[serde(default)]
    scope: Vec<RawScope>,
    #[serde(default)]
    question: Vec<RawQuestion>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScope {
    clause: String,
    select: String,
    #[serde(default)]
    filters: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuestion {
    id: String,
    prompt: String,
    #[serde(default)]
    clauses: Vec<String>,
    expect: RawPredicate,
    #[serde(default)]
    derived_from: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawPredicate {
    Atom(RawAtom),
    AllOf(RawAllOf),
    AnyOf(RawAnyOf),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    key: String,
    value: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAllOf {
    all_of: Vec<RawPredicate>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnyOf {
    any_of: Vec<RawPredicate>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMapping {
    old: u32,
    new: Option<u32>,
}

pub(super) fn convert(version: CatalogVersion, text: &str) -> Result<Catalog, String> {
    let raw: RawCatalog = toml::from_str(text).map_err(|e| e.to_string())?;
    let declared: CatalogVersion = raw.version.parse()?;
    if declared != version {
        return Err(format!("file declares version {declared}, expected {version}"));
    }

    let mut flaws = Vec::with_capacity(raw.flaw.len());
    let mut question_ids = HashSet::new();
    for f in raw.flaw {
        let def = convert_flaw(version, f)?;
        for q in &def.questions {
            if !question_ids.insert(q.id.clone()) {
                return Err(format!("question id '{}' used twice", q.id));
            }
        }
        flaws.push(def);
    }
    flaws.sort_by_key(|f| f.id);
    let ids: Vec<u32> = flaws.iter().map(|f| f.id).collect();
    let wanted: Vec<u32> = (1..=version.flaw_count()).collect();
    if ids != wanted {
        return Err(format!(
            "flaw ids must be exactly 1..={}, found {ids:?}",
            version.flaw_count()
        ));
    }

    let mapping = convert_mapping(version, raw.mapping)?;
    if version == CatalogVersion::V2 {
        for f in &flaws {
            if !mapping.iter().any(|m| m.new_id == Some(f.id)) {
                return Err(format!("flaw {} has no version-1 predecessor", f.id));
            }
        }
    }

    Ok(Catalog {
        version,
        flaws,
        mapping,
    })
}

fn convert_flaw(version: CatalogVersion, f: RawFlaw) -> Result<FlawDefinition, String> {
    let ctx = |msg: String| format!("flaw {}: {msg}", f.id);
    if f.name.trim().is_empty() || f.description.trim().is_empty() {
        return Err(ctx("name and description must be non-empty".into()));
    }
    if f.scope.is_empty() {
        return Err(ctx("needs at least one scope clause".into()));
    }
    if f.question.is_empty() {
        return Err(ctx("needs at least one question".into()));
    }

    let mut clauses: Vec<ScopeClause> = Vec::new();
    for s in f.scope {
        if clauses.iter().any(|c| c.label == s.clause) {
            return Err(ctx(format!("clause '{}' declared twice", s.clause)));
        }
        let selector: Selector = s.select.parse().map_err(&ctx)?;
        let mut filters = Vec::new();
        for text in &s.filters {
            let filter: Filter = text.parse().map_err(&ctx)?;
            if !filter.applies_to(selector.target_scope()) {
                return Err(ctx(format!("filter '{filter}' cannot narrow selector '{selector}'")));
            }
            filters.push(filter);
        }
        clauses.push(ScopeClause {
            label: s.clause,
            selector,
            filters,
        });
    }

    let mut questions = Vec::new();
    for q in f.question {
        let qctx = |msg: String| ctx(format!("question {}: {msg}", q.id));
        if q.prompt.trim().is_empty() {
            return Err(qctx("empty prompt".into()));
        }
        for label in &q.clauses {
            if !clauses.iter().any(|c| &c.label == label) {
                return Err(qctx(format!("unknown clause '{label}'")));
            }
        }
        let predicate = convert_predicate(&q.expect).map_err(&qctx)?;
        let spec = QuestionSpec {
            id: q.id.clone(),
            prompt: q.prompt,
            clauses: q.clauses,
            predicate,
            derived_from: q.derived_from,
        };
        for clause in clauses.iter().filter(|c| spec.applies_to_clause(&c.label)) {
            let target = clause.selector.target_scope();
            for atom in spec.predicate.atoms() {
                match atom.required_scope(target) {
                    Some(scope) if scope == atom.key.scope() => {}
                    _ => {
                        return Err(qctx(format!(
                            "'{atom}' cannot be asked of {target} targets from clause '{}'",
                            clause.label
                        )))
                    }
                }
            }
        }
        match version {
            CatalogVersion::V1 if !spec.derived_from.is_empty() => {
                return Err(qctx("derived_from is only meaningful in version 2".into()))
            }
            CatalogVersion::V2 if spec.derived_from.is_empty() => {
                return Err(qctx("derived_from must name the version-1 questions it replaces".into()))
            }
            _ => {}
        }
        questions.push(spec);
    }

    Ok(FlawDefinition {
        id: f.id,
        version,
        name: f.name,
        description: f.description,
        scope: ScopeSpec { clauses },
        questions,
        cwe_refs: f.cwe,
        applicable: f.applicable,
        note: f.note,
    })
}

fn convert_predicate(p: &RawPredicate) -> Result<Predicate, String> {
    match p {
        RawPredicate::Atom(a) => {
            let (subject, key_name) = match a.key.split_once('.') {
                Some(("source", k)) => (Subject::Source, k),
                Some(("target", k)) => (Subject::Target, k),
                Some((other, _)) => return Err(format!("unknown subject '{other}'")),
                None => (Subject::Item, a.key.as_str()),
            };
            let key = AnnotationKey::from_name(key_name)
                .ok_or_else(|| format!("unregistered annotation key '{key_name}'"))?;
            let expect = match a.value.as_str() {
                "yes" => true,
                "no" => false,
                other => return Err(format!("expected value must be yes or no, got '{other}'")),
            };
            Ok(Predicate::Atom(Atom {
                subject,
                key,
                expect,
            }))
        }
        RawPredicate::AllOf(RawAllOf { all_of: ps }) | RawPredicate::AnyOf(RawAnyOf { any_of: ps })
            if ps.is_empty() =>
        {
            Err("composite predicate needs at least one operand".into())
        }
        RawPredicate::AllOf(RawAllOf { all_of }) => Ok(Predicate::AllOf(
            all_of.iter().map(convert_predicate).collect::<Result<_, _>>()?,
        )),
        RawPredicate::AnyOf(RawAnyOf { any_of }) => Ok(Predicate::AnyOf(
            any_of.iter().map(convert_predicate).collect::<Result<_, _>>()?,
        )),
    }
}

fn convert_mapping(version: CatalogVersion, raw: Vec<RawMapping>) -> Result<Vec<IdMapping>, String> {
    if version == CatalogVersion::V1 {
        if !raw.is_empty() {
            return Err("version 1 carries no id mapping".into());
        }
        return Ok(Vec::new());
    }
    let mut mapping: Vec<IdMapping> = raw
        .into_iter()
        .map(|m| IdMapping {
            old_id: m.old,
            new_id: m.new,
        })
        .collect();
    mapping.sort_by_key(|m| m.old_id);
    let old: Vec<u32> = mapping.iter().map(|m| m.old_id).collect();
    let total = CatalogVersion::V1.flaw_count();
    if old != (1..=total).collect::<Vec<_>>() {
        return Err(format!("mapping must cover old ids 1..={total} once each, found {old:?}"));
    }
    if let Some(bad) = mapping
        .iter()
        .find(|m| m.new_id.is_some_and(|n| n == 0 || n > version.flaw_count()))
    {
        return Err(format!("old id {} maps outside 1..={}", bad.old_id, version.flaw_count()));
    }
    let removed = mapping.iter().filter(|m| m.new_id.is_none()).count();
    if removed != 1 {
        return Err(format!("exactly one flaw must be removed, found {removed}"));
    }
    Ok(mapping)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
version = "v1"
[[flaw]]
id = 1
name = "n"
description = "d"
[[flaw.scope]]
clause = "c"
select = "flows"
[[flaw.question]]
id = "1.1"
prompt = "p"
expect = { key = "channel_encrypted", value = "yes" }
"#;

    fn one_flaw(body: &str) -> Result<FlawDefinition, String> {
        let raw: RawCatalog = toml::from_str(body).map_err(|e| e.to_string())?;
        convert_flaw(CatalogVersion::V1, raw.flaw.into_iter().next().unwrap())
    }

    #[test]
    fn minimal_flaw_converts() {
        let f = one_flaw(MINIMAL).unwrap();
        assert_eq!(f.questions.len(), 1);
        assert!(f.applicable);
        // Nineteen flaws are required for a whole catalog.
        assert!(convert(CatalogVersion::V1, MINIMAL).unwrap_err().contains("1..=19"));
    }

    #[test]
    fn rejects_bad_rules() {
        let cases = [
            ("channel_encrypted", "secure_channel"),
            ("channel_encrypted", "target.channel_encrypted"),
            ("channel_encrypted", "chanel_encrypted"),
            ("\"yes\"", "\"maybe\""),
            ("select = \"flows\"", "select = \"flows\"\nfilters = [\"entry_point\"]"),
            ("select = \"flows\"", "select = \"pipes\""),
            ("prompt = \"p\"", "prompt = \"p\"\nclauses = [\"zz\"]"),
        ];
        for (from, to) in cases {
            let text = MINIMAL.replacen(from, to, 1);
            assert!(one_flaw(&text).is_err(), "accepted: {to}");
        }
    }

    #[test]
    fn composite_predicates() {
        let text = MINIMAL.replace(
            "expect = { key = \"channel_encrypted\", value = \"yes\" }",
            "expect = { all_of = [{ key = \"channel_encrypted\", value = \"yes\" }, { any_of = [{ key = \"target.logs_critical_access\", value = \"yes\" }] }] }",
        );
        let f = one_flaw(&text).unwrap();
        assert_eq!(f.questions[0].predicate.atoms().len(), 2);
        let empty = MINIMAL.replace(
            "expect = { key = \"channel_encrypted\", value = \"yes\" }",
            "expect = { all_of = [] }",
        );
        assert!(one_flaw(&empty).is_err());
    }
}
