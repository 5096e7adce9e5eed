//! Rule vocabulary: scope selectors, filters and question predicates.

use std::fmt;
use std::str::FromStr;

use crate::model::{AnnotationKey, AnnotationScope, AssetCategory, ElementKind, Sensitivity};

/// Base set of inspection targets a scope clause starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Selector {
    ExternalEntities,
    Processes,
    DataStores,
    Flows,
    Sessions,
    /// Every flow lying on a path of a high-sensitivity asset.
    AssetPaths,
}

impl Selector {
    pub fn as_str(self) -> &'static str {
        match self {
            Selector::ExternalEntities => "external_entities",
            Selector::Processes => "processes",
            Selector::DataStores => "data_stores",
            Selector::Flows => "flows",
            Selector::Sessions => "sessions",
            Selector::AssetPaths => "asset_paths",
        }
    }

    /// Kind of item the selector yields.
    pub fn target_scope(self) -> AnnotationScope {
        match self {
            Selector::ExternalEntities | Selector::Processes | Selector::DataStores => {
                AnnotationScope::Element
            }
            Selector::Flows | Selector::AssetPaths => AnnotationScope::Flow,
            Selector::Sessions => AnnotationScope::Session,
        }
    }
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "external_entities" => Selector::ExternalEntities,
            "processes" => Selector::Processes,
            "data_stores" => Selector::DataStores,
            "flows" => Selector::Flows,
            "sessions" => Selector::Sessions,
            "asset_paths" => Selector::AssetPaths,
            other => return Err(format!("unknown selector '{other}'")),
        })
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Narrows a selector's base set. Levels are minimums: `high` matches only
/// high, `medium` matches medium and high.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Filter {
    CrossingBoundary,
    CarriesSensitivity(Sensitivity),
    InteractsWithAssets(Sensitivity),
    TargetsStore,
    SourceKind(Vec<ElementKind>),
    TargetKind(Vec<ElementKind>),
    SourceInteractsWithAssets(Sensitivity),
    TargetInteractsWithAssets(Sensitivity),
    EntryPoint,
    Internal,
    HandlesCategory(AssetCategory),
}

impl Filter {
    pub fn applies_to(&self, scope: AnnotationScope) -> bool {
        use AnnotationScope::*;
        match self {
            Filter::CrossingBoundary => matches!(scope, Flow | Session),
            Filter::InteractsWithAssets(_)
            | Filter::EntryPoint
            | Filter::Internal
            | Filter::HandlesCategory(_) => scope == Element,
            Filter::CarriesSensitivity(_)
            | Filter::TargetsStore
            | Filter::SourceKind(_)
            | Filter::TargetKind(_)
            | Filter::SourceInteractsWithAssets(_)
            | Filter::TargetInteractsWithAssets(_) => scope == Flow,
        }
    }
}

impl FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, args): (&str, Vec<&str>) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| format!("filter '{s}' is missing ')'"))?;
                (
                    name.trim(),
                    inner.split(',').map(str::trim).filter(|a| !a.is_empty()).collect(),
                )
            }
            None => (s, Vec::new()),
        };
        let level = |args: &[&str]| -> Result<Sensitivity, String> {
            match args {
                [one] => one.parse(),
                _ => Err(format!("filter '{name}' takes one sensitivity level")),
            }
        };
        let kinds = |args: &[&str]| -> Result<Vec<ElementKind>, String> {
            if args.is_empty() {
                return Err(format!("filter '{name}' needs at least one element kind"));
            }
            args.iter().map(|a| a.parse()).collect()
        };
        let none = |f: Filter| {
            if args.is_empty() {
                Ok(f)
            } else {
                Err(format!("filter '{name}' takes no arguments"))
            }
        };
        match name {
            "crossing_boundary" => none(Filter::CrossingBoundary),
            "targets_store" => none(Filter::TargetsStore),
            "entry_point" => none(Filter::EntryPoint),
            "internal" => none(Filter::Internal),
            "carries_sensitivity" => Ok(Filter::CarriesSensitivity(level(&args)?)),
            "interacts_with_assets" => Ok(Filter::InteractsWithAssets(level(&args)?)),
            "source_interacts_with_assets" => Ok(Filter::SourceInteractsWithAssets(level(&args)?)),
            "target_interacts_with_assets" => Ok(Filter::TargetInteractsWithAssets(level(&args)?)),
            "source_kind" => Ok(Filter::SourceKind(kinds(&args)?)),
            "target_kind" => Ok(Filter::TargetKind(kinds(&args)?)),
            "handles_category" => match &args[..] {
                [one] => Ok(Filter::HandlesCategory(one.parse()?)),
                _ => Err("filter 'handles_category' takes one asset category".to_string()),
            },
            other => Err(format!("unknown filter '{other}'")),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kinds = |ks: &[ElementKind]| {
            ks.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(", ")
        };
        match self {
            Filter::CrossingBoundary => f.write_str("crossing_boundary"),
            Filter::TargetsStore => f.write_str("targets_store"),
            Filter::EntryPoint => f.write_str("entry_point"),
            Filter::Internal => f.write_str("internal"),
            Filter::CarriesSensitivity(l) => write!(f, "carries_sensitivity({})", l.as_str()),
            Filter::InteractsWithAssets(l) => write!(f, "interacts_with_assets({})", l.as_str()),
            Filter::SourceInteractsWithAssets(l) => {
                write!(f, "source_interacts_with_assets({})", l.as_str())
            }
            Filter::TargetInteractsWithAssets(l) => {
                write!(f, "target_interacts_with_assets({})", l.as_str())
            }
            Filter::SourceKind(k) => write!(f, "source_kind({})", kinds(k)),
            Filter::TargetKind(k) => write!(f, "target_kind({})", kinds(k)),
            Filter::HandlesCategory(c) => write!(f, "handles_category({})", c.as_str()),
        }
    }
}

/// One labelled part of a scope: a selector narrowed by filters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeClause {
    pub label: String,
    pub selector: Selector,
    pub filters: Vec<Filter>,
}

impl fmt::Display for ScopeClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.selector)?;
        if !self.filters.is_empty() {
            let fs: Vec<String> = self.filters.iter().map(ToString::to_string).collect();
            write!(f, " where {}", fs.join(" and "))?;
        }
        Ok(())
    }
}

/// Union of clauses. A target selected by several clauses is inspected once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeSpec {
    pub clauses: Vec<ScopeClause>,
}

/// Which item an atom reads its annotation from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subject {
    /// The inspection target itself.
    Item,
    /// The source element of a flow target.
    Source,
    /// The target element of a flow target.
    Target,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub subject: Subject,
    pub key: AnnotationKey,
    /// The answer is `Yes` when the annotation equals this value.
    pub expect: bool,
}

impl Atom {
    /// Scope the read annotation must belong to, given the target's scope.
    pub fn required_scope(&self, target: AnnotationScope) -> Option<AnnotationScope> {
        match self.subject {
            Subject::Item => Some(target),
            Subject::Source | Subject::Target if target == AnnotationScope::Flow => {
                Some(AnnotationScope::Element)
            }
            Subject::Source | Subject::Target => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.subject {
            Subject::Item => "",
            Subject::Source => "source.",
            Subject::Target => "target.",
        };
        write!(
            f,
            "{prefix}{} == {}",
            self.key,
            if self.expect { "yes" } else { "no" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    Atom(Atom),
    AllOf(Vec<Predicate>),
    AnyOf(Vec<Predicate>),
}

impl Predicate {
    pub fn atoms(&self) -> Vec<&Atom> {
        match self {
            Predicate::Atom(a) => vec![a],
            Predicate::AllOf(ps) | Predicate::AnyOf(ps) => ps.iter().flat_map(|p| p.atoms()).collect(),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Atom(a) => a.fmt(f),
            Predicate::AllOf(ps) | Predicate::AnyOf(ps) => {
                let name = if matches!(self, Predicate::AllOf(_)) { "all_of" } else { "any_of" };
                let parts: Vec<String> = ps.iter().map(ToString::to_string).collect();
                write!(f, "{name}({})", parts.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionSpec {
    pub id: String,
    pub prompt: String,
    /// Clause labels the question applies to; empty means every clause.
    pub clauses: Vec<String>,
    pub predicate: Predicate,
    /// Version-1 question ids this question replaces (version 2 only).
    pub derived_from: Vec<String>,
}

impl QuestionSpec {
    pub fn applies_to_clause(&self, label: &str) -> bool {
        self.clauses.is_empty() || self.clauses.iter().any(|c| c == label)
    }
}
