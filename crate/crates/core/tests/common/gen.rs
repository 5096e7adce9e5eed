//! proptest strategies shared by the property suites.

#![allow(dead_code)]

use archflaw_core::catalog::CatalogVersion;
use archflaw_core::dsl::{is_reserved, DeclKind, Declaration, Literal};
use archflaw_core::engine::{Answer, Finding, FindingSet, Verdict, FINDINGS_SCHEMA};
use archflaw_core::model::{AnnotationKey, AnnotationScope, ArchModel, InspectionTarget, TriState};
use proptest::collection::vec;
use proptest::prelude::*;

pub fn ident() -> impl Strategy<Value = String> {
    "[A-Za-z_][A-Za-z0-9_]{0,8}".prop_filter("reserved word", |s| !is_reserved(s))
}

pub fn text() -> impl Strategy<Value = String> {
    "[ -~\t\né中]{0,12}"
}

pub fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        any::<bool>().prop_map(Literal::Bool),
        Just(Literal::Unknown),
        ident().prop_map(Literal::Ident),
        text().prop_map(Literal::Str),
    ]
}

fn attributes() -> impl Strategy<Value = Vec<(String, Literal)>> {
    vec((ident(), literal()), 0..4)
}

/// A syntactically valid declaration; references need not resolve.
pub fn declaration() -> impl Strategy<Value = Declaration> {
    let element = (
        prop_oneof![Just(DeclKind::Entity), Just(DeclKind::Process), Just(DeclKind::Store)],
        ident(),
        proptest::option::of(ident()),
        attributes(),
    )
        .prop_map(|(kind, name, boundary, attrs)| {
            let mut d = Declaration::new(kind, name);
            if let Some(b) = boundary {
                d = d.in_boundary(b);
            }
            with_attrs(d, attrs)
        });
    let plain = (prop_oneof![Just(DeclKind::Boundary), Just(DeclKind::Asset)], ident(), attributes())
        .prop_map(|(kind, name, attrs)| with_attrs(Declaration::new(kind, name), attrs));
    let flow = (ident(), ident(), ident(), vec(ident(), 0..3), attributes()).prop_map(
        |(name, a, b, carries, attrs)| {
            with_attrs(Declaration::new(DeclKind::Flow, name).between(a, b).carrying(carries), attrs)
        },
    );
    let session = (ident(), ident(), ident(), attributes()).prop_map(|(name, a, b, attrs)| {
        with_attrs(Declaration::new(DeclKind::Session, name).between(a, b), attrs)
    });
    prop_oneof![element, plain, flow, session]
}

fn with_attrs(mut d: Declaration, attrs: Vec<(String, Literal)>) -> Declaration {
    for (k, v) in attrs {
        d = d.attr(k, v);
    }
    d
}

/// A model header followed by arbitrary statements.
pub fn declarations() -> impl Strategy<Value = Vec<Declaration>> {
    (text(), vec(declaration(), 0..12)).prop_map(|(name, body)| {
        let mut decls = vec![Declaration::new(DeclKind::ModelHeader, name)];
        decls.extend(body);
        decls
    })
}

fn tri() -> impl Strategy<Value = TriState> {
    prop_oneof![Just(TriState::Yes), Just(TriState::No), Just(TriState::Unknown)]
}

fn annotations(scope: AnnotationScope) -> impl Strategy<Value = Vec<(AnnotationKey, TriState)>> {
    let keys: Vec<AnnotationKey> = AnnotationKey::keys_for(scope).collect();
    vec((proptest::sample::select(keys), tri()), 0..8)
}

fn annotate(mut d: Declaration, anns: Vec<(AnnotationKey, TriState)>) -> Declaration {
    for (k, v) in anns {
        if d.attribute(k.name()).is_some() {
            continue;
        }
        let lit = match v {
            TriState::Yes => Literal::Bool(true),
            TriState::No => Literal::Bool(false),
            TriState::Unknown => Literal::Unknown,
        };
        d = d.attr(k.name(), lit);
    }
    d
}

/// A small valid model: up to six elements in up to two boundaries, with
/// random assets, flows, sessions and annotations.
pub fn arch_model() -> impl Strategy<Value = ArchModel> {
    let elements = vec((0..3u8, 0..3u8, annotations(AnnotationScope::Element)), 1..7);
    let assets = vec((0..3u8, 0..6u8), 0..4);
    (elements, assets).prop_flat_map(|(elements, assets)| {
        let n = elements.len();
        let na = assets.len();
        let flows = vec(
            (0..n, 0..n, vec(0..na.max(1), 0..3), annotations(AnnotationScope::Flow)),
            0..9,
        );
        let sessions = vec((0..n, 0..n, annotations(AnnotationScope::Session)), 0..3);
        (Just(elements), Just(assets), flows, sessions).prop_map(build_model)
    })
}

type ElementSpec = (u8, u8, Vec<(AnnotationKey, TriState)>);
type FlowSpec = (usize, usize, Vec<usize>, Vec<(AnnotationKey, TriState)>);
type SessionSpec = (usize, usize, Vec<(AnnotationKey, TriState)>);

fn build_model(
    (elements, assets, flows, sessions): (Vec<ElementSpec>, Vec<(u8, u8)>, Vec<FlowSpec>, Vec<SessionSpec>),
) -> ArchModel {
    const KINDS: [DeclKind; 3] = [DeclKind::Entity, DeclKind::Process, DeclKind::Store];
    const SENS: [&str; 3] = ["low", "medium", "high"];
    const CATS: [&str; 6] = ["credential", "crypto_key", "session_token", "personal_data", "measurement", "other"];
    let mut decls = vec![
        Declaration::new(DeclKind::ModelHeader, "generated"),
        Declaration::new(DeclKind::Boundary, "B1"),
        Declaration::new(DeclKind::Boundary, "B2"),
    ];
    for (i, (s, c)) in assets.iter().enumerate() {
        decls.push(
            Declaration::new(DeclKind::Asset, format!("a{i}"))
                .attr("sensitivity", Literal::Ident(SENS[*s as usize].into()))
                .attr("category", Literal::Ident(CATS[*c as usize].into())),
        );
    }
    for (i, (kind, zone, anns)) in elements.into_iter().enumerate() {
        let mut d = Declaration::new(KINDS[kind as usize], format!("e{i}"));
        if zone > 0 {
            d = d.in_boundary(format!("B{zone}"));
        }
        decls.push(annotate(d, anns));
    }
    for (i, (a, b, carries, anns)) in flows.into_iter().enumerate() {
        if a == b {
            continue;
        }
        let mut carried: Vec<String> = carries
            .into_iter()
            .filter(|c| *c < assets.len())
            .map(|c| format!("a{c}"))
            .collect();
        carried.sort();
        carried.dedup();
        let d = Declaration::new(DeclKind::Flow, format!("f{i}"))
            .between(format!("e{a}"), format!("e{b}"))
            .carrying(carried);
        decls.push(annotate(d, anns));
    }
    for (i, (a, b, anns)) in sessions.into_iter().enumerate() {
        if a == b {
            continue;
        }
        let d = Declaration::new(DeclKind::Session, format!("s{i}")).between(format!("e{a}"), format!("e{b}"));
        decls.push(annotate(d, anns));
    }
    archflaw_core::model::validate_model(&decls).expect("generated models are valid")
}

fn target() -> impl Strategy<Value = InspectionTarget> {
    (0..3u8, ident()).prop_map(|(k, id)| match k {
        0 => InspectionTarget::Element(id),
        1 => InspectionTarget::Flow(id),
        _ => InspectionTarget::Session(id),
    })
}

pub fn finding_set() -> impl Strategy<Value = FindingSet> {
    let version = prop_oneof![Just(CatalogVersion::V1), Just(CatalogVersion::V2)];
    (text(), version).prop_flat_map(|(model, catalog_version)| {
        let finding = (
            1..20u32,
            target(),
            prop_oneof![Just(Verdict::Violation), Just(Verdict::InsufficientInfo)],
            vec(("[0-9]{1,2}\\.[0-9]{1,2}", tri()), 0..4),
        )
            .prop_map(move |(flaw_id, location, verdict, trail)| Finding {
                flaw_id,
                catalog_version,
                location,
                verdict,
                answer_trail: trail
                    .into_iter()
                    .map(|(question, answer)| Answer { question, answer })
                    .collect(),
            });
        (vec(finding, 0..6), vec(1..20u32, 0..3)).prop_map(move |(findings, suppressed)| FindingSet {
            schema: FINDINGS_SCHEMA,
            model: model.clone(),
            catalog_version,
            findings,
            suppressed,
        })
    })
}
