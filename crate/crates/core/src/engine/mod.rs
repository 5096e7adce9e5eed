//! Applies a catalog to a model and reports findings.

mod render;
mod scope;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::model::InspectionTarget;
pub use render::{render_findings, OutputFormat};
pub use scope::{scope_members, select_clause, select_scope};

use crate::catalog::{Catalog, CatalogVersion, FlawDefinition, Predicate, QuestionSpec, Subject};
use crate::model::{ArchModel, KeyKindMismatch, TriState};

/// Version of the findings JSON layout.
pub const FINDINGS_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Some question was answered `no`.
    Violation,
    /// No question was answered `no`, but at least one could not be answered.
    InsufficientInfo,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Violation => "violation",
            Verdict::InsufficientInfo => "insufficient-info",
        }
    }

    /// Aggregates answers; `None` when every answer is `Yes`.
    pub fn from_answers<I: IntoIterator<Item = TriState>>(answers: I) -> Option<Verdict> {
        let mut unknown = false;
        for a in answers {
            match a {
                TriState::No => return Some(Verdict::Violation),
                TriState::Unknown => unknown = true,
                TriState::Yes => {}
            }
        }
        unknown.then_some(Verdict::InsufficientInfo)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Answer {
    pub question: String,
    pub answer: TriState,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Finding {
    pub flaw_id: u32,
    pub catalog_version: CatalogVersion,
    pub location: InspectionTarget,
    pub verdict: Verdict,
    pub answer_trail: Vec<Answer>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindingSet {
    pub schema: u32,
    pub model: String,
    pub catalog_version: CatalogVersion,
    pub findings: Vec<Finding>,
    /// Flaw ids excluded from the run, ascending.
    pub suppressed: Vec<u32>,
}

#[derive(Debug, thiserror::Error)]
pub enum FindingsJsonError {
    #[error("invalid findings JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported findings schema {0} (expected {FINDINGS_SCHEMA})")]
    Schema(u32),
}

impl FindingSet {
    pub fn from_json(text: &str) -> Result<FindingSet, FindingsJsonError> {
        let set: FindingSet = serde_json::from_str(text)?;
        if set.schema != FINDINGS_SCHEMA {
            return Err(FindingsJsonError::Schema(set.schema));
        }
        Ok(set)
    }

    pub fn violations(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| f.verdict == Verdict::Violation)
            .count()
    }

    pub fn insufficient(&self) -> usize {
        self.findings.len() - self.violations()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    KeyKindMismatch(#[from] KeyKindMismatch),
    #[error("{0} is not part of the model")]
    UnknownTarget(InspectionTarget),
    #[error("'{0}' can only be read from flow targets")]
    EndpointOfNonFlow(String),
}

/// Answers one closed question for one target. An atom answers `Yes` when
/// the annotation equals the expected value, `No` when it differs and
/// `Unknown` when it is absent. `all_of` is `No` if any operand is `No`,
/// else `Unknown` if any is `Unknown`, else `Yes`; `any_of` is the dual.
pub fn eval_question(
    q: &QuestionSpec,
    target: &InspectionTarget,
    model: &ArchModel,
) -> Result<TriState, EngineError> {
    eval_predicate(&q.predicate, target, model)
}

fn eval_predicate(
    p: &Predicate,
    target: &InspectionTarget,
    model: &ArchModel,
) -> Result<TriState, EngineError> {
    match p {
        Predicate::Atom(atom) => {
            let read_from = match atom.subject {
                Subject::Item => target.clone(),
                Subject::Source | Subject::Target => {
                    let InspectionTarget::Flow(id) = target else {
                        return Err(EngineError::EndpointOfNonFlow(atom.to_string()));
                    };
                    let flow = model
                        .flow(id)
                        .ok_or_else(|| EngineError::UnknownTarget(target.clone()))?;
                    let end = if atom.subject == Subject::Source {
                        &flow.source
                    } else {
                        &flow.target
                    };
                    InspectionTarget::Element(end.clone())
                }
            };
            if atom.key.scope() != read_from.scope() {
                return Err(KeyKindMismatch {
                    key: atom.key,
                    expected: atom.key.scope(),
                    actual: read_from.scope(),
                }
                .into());
            }
            let annotations = model
                .annotations_of(&read_from)
                .ok_or(EngineError::UnknownTarget(read_from.clone()))?;
            Ok(match annotations.get(atom.key) {
                TriState::Unknown => TriState::Unknown,
                v => TriState::from_bool(v == TriState::from_bool(atom.expect)),
            })
        }
        Predicate::AllOf(ps) => {
            let mut acc = TriState::Yes;
            for p in ps {
                match eval_predicate(p, target, model)? {
                    TriState::No => acc = TriState::No,
                    TriState::Unknown if acc == TriState::Yes => acc = TriState::Unknown,
                    _ => {}
                }
            }
            Ok(acc)
        }
        Predicate::AnyOf(ps) => {
            let mut acc = TriState::No;
            for p in ps {
                match eval_predicate(p, target, model)? {
                    TriState::Yes => acc = TriState::Yes,
                    TriState::Unknown if acc == TriState::No => acc = TriState::Unknown,
                    _ => {}
                }
            }
            Ok(acc)
        }
    }
}

/// Findings for one flaw, in scope order.
pub fn inspect_flaw(flaw: &FlawDefinition, version: CatalogVersion, model: &ArchModel) -> Vec<Finding> {
    let mut out = Vec::new();
    for (target, labels) in scope_members(&flaw.scope, model) {
        let answers: Vec<Answer> = flaw
            .questions
            .iter()
            .filter(|q| labels.iter().any(|l| q.applies_to_clause(l)))
            .map(|q| Answer {
                question: q.id.clone(),
                answer: eval_question(q, &target, model)
                    .expect("catalog rules are checked against target kinds at load"),
            })
            .collect();
        if let Some(verdict) = Verdict::from_answers(answers.iter().map(|a| a.answer)) {
            out.push(Finding {
                flaw_id: flaw.id,
                catalog_version: version,
                location: target,
                verdict,
                answer_trail: answers,
            });
        }
    }
    out
}

fn active_flaws<'c>(catalog: &'c Catalog, suppress: &BTreeSet<u32>) -> Vec<&'c FlawDefinition> {
    catalog
        .flaws()
        .iter()
        .filter(|f| f.applicable && !suppress.contains(&f.id))
        .collect()
}

fn assemble(model: &ArchModel, catalog: &Catalog, suppress: &BTreeSet<u32>, mut findings: Vec<Finding>) -> FindingSet {
    findings.sort_by(|a, b| (a.flaw_id, &a.location).cmp(&(b.flaw_id, &b.location)));
    FindingSet {
        schema: FINDINGS_SCHEMA,
        model: model.name().to_string(),
        catalog_version: catalog.version(),
        findings,
        suppressed: suppress
            .iter()
            .copied()
            .filter(|id| catalog.contains(*id))
            .collect(),
    }
}

/// Runs every applicable, non-suppressed flaw against the model. Findings
/// are ordered by flaw id, then location.
pub fn detect(model: &ArchModel, catalog: &Catalog, suppress: &BTreeSet<u32>) -> FindingSet {
    let findings = active_flaws(catalog, suppress)
        .into_iter()
        .flat_map(|f| inspect_flaw(f, catalog.version(), model))
        .collect();
    assemble(model, catalog, suppress, findings)
}

/// [`detect`] with flaws inspected on the current rayon pool. The result is
/// identical to the sequential run.
pub fn detect_parallel(model: &ArchModel, catalog: &Catalog, suppress: &BTreeSet<u32>) -> FindingSet {
    let findings = active_flaws(catalog, suppress)
        .into_par_iter()
        .flat_map_iter(|f| inspect_flaw(f, catalog.version(), model))
        .collect();
    assemble(model, catalog, suppress, findings)
}

#[cfg(test)]
mod tests;
