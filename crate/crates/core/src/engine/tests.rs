use super::*;
use crate::catalog::CatalogVersion;
use crate::dsl::parse;
use crate::model::{validate_model, AnnotationKey};

fn model(src: &str) -> ArchModel {
    validate_model(&parse(src).unwrap()).unwrap()
}

const TOY: &str = r#"
model "toy" {
  boundary Inside
  asset Secret { sensitivity: high }
  entity User
  process Api in boundary Inside { performs_authorization: true }
  store Db in boundary Inside
  flow f1: User -> Api carries Secret { endpoint_authenticated: true }
  flow f2: Api -> Db carries Secret
}
"#;

#[test]
fn verdict_aggregation() {
    use TriState::*;
    assert_eq!(Verdict::from_answers([Yes, Yes]), None);
    assert_eq!(Verdict::from_answers([Yes, Unknown]), Some(Verdict::InsufficientInfo));
    assert_eq!(Verdict::from_answers([Unknown, No]), Some(Verdict::Violation));
    assert_eq!(Verdict::from_answers([]), None);
}

#[test]
fn flaw_one_single_violation_on_unauthenticated_flow() {
    let m = model(
        r#"model "m" {
          entity U
          process P
          asset A { sensitivity: high }
          flow f1: U -> P carries A { endpoint_authenticated: false }
        }"#,
    );
    let mut only_one: BTreeSet<u32> = (2..=19).collect();
    let set = detect(&m, Catalog::builtin(CatalogVersion::V1), &only_one);
    assert_eq!(set.findings.len(), 1);
    let f = &set.findings[0];
    assert_eq!(f.flaw_id, 1);
    assert_eq!(f.location, InspectionTarget::Flow("f1".into()));
    assert_eq!(f.verdict, Verdict::Violation);
    assert_eq!(f.answer_trail[0].question, "1.1");
    assert_eq!(f.answer_trail[0].answer, TriState::No);

    only_one.insert(1);
    assert!(detect(&m, Catalog::builtin(CatalogVersion::V1), &only_one).findings.is_empty());
}

#[test]
fn unknown_annotation_gives_insufficient_info() {
    let m = model(
        r#"model "m" {
          entity U
          process P
          asset A { sensitivity: high }
          flow f1: U -> P carries A
        }"#,
    );
    let rest: BTreeSet<u32> = (2..=19).collect();
    let set = detect(&m, Catalog::builtin(CatalogVersion::V1), &rest);
    assert_eq!(set.findings.len(), 1);
    assert_eq!(set.findings[0].verdict, Verdict::InsufficientInfo);
}

#[test]
fn flow_endpoint_atoms_read_element_annotations() {
    let m = model(TOY);
    let cat = Catalog::builtin(CatalogVersion::V1);
    let flaw13 = cat.flaw(13).unwrap();
    let targets = select_scope(&flaw13.scope, &m);
    assert_eq!(targets, vec![InspectionTarget::Flow("f2".into())]);
    let m = m
        .with_annotation(&InspectionTarget::Element("Db".into()), AnnotationKey::EncryptedAtRest, TriState::No)
        .unwrap();
    let q = &flaw13.questions[0];
    assert_eq!(eval_question(q, &targets[0], &m).unwrap(), TriState::No);
}

#[test]
fn predicate_logic_is_three_valued() {
    use crate::catalog::{Atom, Predicate, Subject};
    let m = model(TOY);
    let api = InspectionTarget::Element("Api".into());
    let atom = |key, expect| Predicate::Atom(Atom { subject: Subject::Item, key, expect });
    let q = |p| QuestionSpec {
        id: "x".into(),
        prompt: String::new(),
        clauses: vec![],
        predicate: p,
        derived_from: vec![],
    };
    let yes = atom(AnnotationKey::PerformsAuthorization, true);
    let no = atom(AnnotationKey::PerformsAuthorization, false);
    let unk = atom(AnnotationKey::AccessControlled, true);
    let eval = |p| eval_question(&q(p), &api, &m).unwrap();
    assert_eq!(eval(yes.clone()), TriState::Yes);
    assert_eq!(eval(no.clone()), TriState::No);
    assert_eq!(eval(unk.clone()), TriState::Unknown);
    assert_eq!(eval(Predicate::AllOf(vec![yes.clone(), unk.clone()])), TriState::Unknown);
    assert_eq!(eval(Predicate::AllOf(vec![unk.clone(), no.clone()])), TriState::No);
    assert_eq!(eval(Predicate::AnyOf(vec![no.clone(), unk.clone()])), TriState::Unknown);
    assert_eq!(eval(Predicate::AnyOf(vec![unk.clone(), yes.clone()])), TriState::Yes);
    assert_eq!(eval(Predicate::AnyOf(vec![no.clone(), no])), TriState::No);

    let session_key = atom(AnnotationKey::TimeoutSet, true);
    assert!(matches!(
        eval_question(&q(session_key), &api, &m),
        Err(EngineError::KeyKindMismatch(_))
    ));
}

#[test]
fn findings_sorted_and_parallel_identical() {
    let m = model(TOY);
    for v in [CatalogVersion::V1, CatalogVersion::V2] {
        let cat = Catalog::builtin(v);
        let seq = detect(&m, cat, &BTreeSet::new());
        let par = detect_parallel(&m, cat, &BTreeSet::new());
        assert_eq!(seq, par);
        let keys: Vec<_> = seq.findings.iter().map(|f| (f.flaw_id, f.location.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
    }
}

#[test]
fn suppression_removes_only_that_flaw() {
    let m = model(TOY);
    let cat = Catalog::builtin(CatalogVersion::V1);
    let all = detect(&m, cat, &BTreeSet::new());
    let without = detect(&m, cat, &BTreeSet::from([8]));
    let expected: Vec<_> = all.findings.iter().filter(|f| f.flaw_id != 8).cloned().collect();
    assert_eq!(without.findings, expected);
    assert_eq!(without.suppressed, vec![8]);
}

#[test]
fn json_round_trip_and_text_lines() {
    let m = model(TOY);
    let set = detect(&m, Catalog::builtin(CatalogVersion::V2), &BTreeSet::new());
    let json = render_findings(&set, OutputFormat::Json);
    assert!(json.contains("\"schema\": 1"));
    assert_eq!(FindingSet::from_json(&json).unwrap(), set);
    let text = render_findings(&set, OutputFormat::Text);
    assert_eq!(text.lines().count(), set.findings.len() + 2);
    assert!(text.starts_with("findings for model 'toy' (catalog v2)\n"));

    let bad = json.replacen("\"schema\": 1", "\"schema\": 7", 1);
    assert!(matches!(FindingSet::from_json(&bad), Err(FindingsJsonError::Schema(7))));
}
