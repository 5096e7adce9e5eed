//! Turns a declaration list into an [`ArchModel`], collecting every
//! violation instead of stopping at the first.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;

use super::annotation::{AnnotationKey, AnnotationScope, Annotations, TriState};
use super::types::*;
use crate::dsl::decl::{Attribute, DeclKind, Declaration, Literal, NameRef, SourceSpan};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ValidationConfig {
    /// Accept flows whose source and target are the same element.
    pub allow_self_loops: bool,
}

/// What a dangling name was supposed to point at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefRole {
    FlowSource,
    FlowTarget,
    SessionEndpoint,
    Boundary,
    CarriedAsset,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("{}", dangling_message(.owner_kind, .owner, .role, .missing))]
    DanglingReference {
        owner_kind: DeclKind,
        owner: String,
        role: RefRole,
        missing: String,
        span: SourceSpan,
    },
    #[error("duplicate {} id '{id}'", .kind.keyword())]
    DuplicateId {
        kind: DeclKind,
        id: String,
        span: SourceSpan,
    },
    #[error("{} '{owner}' has unknown attribute '{key}'", .owner_kind.keyword())]
    UnknownAnnotationKey {
        owner_kind: DeclKind,
        owner: String,
        key: String,
        span: SourceSpan,
    },
    #[error("{} '{owner}': invalid value '{value}' for '{key}' (expected {expected})", .owner_kind.keyword())]
    InvalidEnumValue {
        owner_kind: DeclKind,
        owner: String,
        key: String,
        value: String,
        expected: &'static str,
        span: SourceSpan,
    },
    #[error("{} '{owner}' sets '{key}' more than once", .owner_kind.keyword())]
    DuplicateAttribute {
        owner_kind: DeclKind,
        owner: String,
        key: String,
        span: SourceSpan,
    },
    #[error("{} '{owner}' is missing required attribute '{key}'", .owner_kind.keyword())]
    MissingAttribute {
        owner_kind: DeclKind,
        owner: String,
        key: &'static str,
        span: SourceSpan,
    },
    #[error("flow '{flow}' connects element '{element}' to itself")]
    SelfLoop {
        flow: String,
        element: String,
        span: SourceSpan,
    },
    #[error("{} '{owner}' cannot have {what}", .owner_kind.keyword())]
    MisplacedClause {
        owner_kind: DeclKind,
        owner: String,
        what: &'static str,
        span: SourceSpan,
    },
    #[error("missing model header")]
    MissingHeader { span: SourceSpan },
    #[error("more than one model header")]
    DuplicateHeader { span: SourceSpan },
}

fn dangling_message(kind: &DeclKind, owner: &str, role: &RefRole, missing: &str) -> String {
    let kw = kind.keyword();
    match role {
        RefRole::FlowSource => format!("{kw} '{owner}' originates from undeclared element '{missing}'"),
        RefRole::FlowTarget => format!("{kw} '{owner}' targets undeclared element '{missing}'"),
        RefRole::SessionEndpoint => format!("{kw} '{owner}' connects undeclared element '{missing}'"),
        RefRole::Boundary => format!("{kw} '{owner}' is placed in undeclared boundary '{missing}'"),
        RefRole::CarriedAsset => format!("{kw} '{owner}' carries undeclared asset '{missing}'"),
    }
}

impl ValidationError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            ValidationError::DanglingReference { span, .. }
            | ValidationError::DuplicateId { span, .. }
            | ValidationError::UnknownAnnotationKey { span, .. }
            | ValidationError::InvalidEnumValue { span, .. }
            | ValidationError::DuplicateAttribute { span, .. }
            | ValidationError::MissingAttribute { span, .. }
            | ValidationError::SelfLoop { span, .. }
            | ValidationError::MisplacedClause { span, .. }
            | ValidationError::MissingHeader { span }
            | ValidationError::DuplicateHeader { span } => span,
        }
    }

    /// Name of the missing declaration for `DanglingReference`.
    pub fn missing_name(&self) -> Option<&str> {
        match self {
            ValidationError::DanglingReference { missing, .. } => Some(missing),
            _ => None,
        }
    }
}

/// Validates with the default configuration.
pub fn validate_model(decls: &[Declaration]) -> Result<ArchModel, Vec<ValidationError>> {
    validate_model_with(decls, ValidationConfig::default())
}

pub fn validate_model_with(
    decls: &[Declaration],
    config: ValidationConfig,
) -> Result<ArchModel, Vec<ValidationError>> {
    Validator::new(config).run(decls)
}

struct Validator {
    config: ValidationConfig,
    errors: Vec<ValidationError>,
}

/// Id namespaces: elements share one, every other kind has its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Namespace {
    Element,
    Boundary,
    Asset,
    Flow,
    Session,
}

fn namespace(kind: DeclKind) -> Option<Namespace> {
    match kind {
        DeclKind::ModelHeader => None,
        DeclKind::Entity | DeclKind::Process | DeclKind::Store => Some(Namespace::Element),
        DeclKind::Boundary => Some(Namespace::Boundary),
        DeclKind::Asset => Some(Namespace::Asset),
        DeclKind::Flow => Some(Namespace::Flow),
        DeclKind::Session => Some(Namespace::Session),
    }
}

impl Validator {
    fn new(config: ValidationConfig) -> Self {
        Validator {
            config,
            errors: Vec::new(),
        }
    }

    fn run(mut self, decls: &[Declaration]) -> Result<ArchModel, Vec<ValidationError>> {
        let mut name = None;
        for d in decls.iter().filter(|d| d.kind == DeclKind::ModelHeader) {
            if name.is_some() {
                self.errors.push(ValidationError::DuplicateHeader {
                    span: d.span.clone(),
                });
            } else {
                name = Some(d.name.clone());
            }
        }
        if name.is_none() {
            self.errors.push(ValidationError::MissingHeader {
                span: decls.first().map(|d| d.span.clone()).unwrap_or_default(),
            });
        }

        // First pass: ids, so forward references resolve.
        let mut seen: HashMap<(Namespace, &str), ()> = HashMap::new();
        let mut unique: Vec<&Declaration> = Vec::new();
        for d in decls {
            let Some(ns) = namespace(d.kind) else { continue };
            if seen.insert((ns, d.name.as_str()), ()).is_some() {
                self.errors.push(ValidationError::DuplicateId {
                    kind: d.kind,
                    id: d.name.clone(),
                    span: d.span.clone(),
                });
            } else {
                unique.push(d);
            }
        }
        let declared = |ns: Namespace, n: &str| seen.contains_key(&(ns, n));

        let mut model = ArchModel {
            name: name.unwrap_or_default(),
            elements: IndexMap::new(),
            flows: IndexMap::new(),
            boundaries: IndexMap::new(),
            assets: IndexMap::new(),
            sessions: IndexMap::new(),
        };

        for d in unique {
            self.check_clauses(d);
            match d.kind {
                DeclKind::ModelHeader => {}
                DeclKind::Entity | DeclKind::Process | DeclKind::Store => {
                    let kind = match d.kind {
                        DeclKind::Entity => ElementKind::ExternalEntity,
                        DeclKind::Process => ElementKind::Process,
                        _ => ElementKind::DataStore,
                    };
                    if let Some(b) = &d.boundary {
                        if !declared(Namespace::Boundary, &b.name) {
                            self.dangling(d, RefRole::Boundary, b);
                        }
                    }
                    let annotations = self.annotations(d, AnnotationScope::Element);
                    model.elements.insert(
                        d.name.clone(),
                        Element {
                            id: d.name.clone(),
                            kind,
                            boundary: d.boundary.as_ref().map(|b| b.name.clone()),
                            annotations,
                        },
                    );
                }
                DeclKind::Boundary => {
                    let mut description = String::new();
                    for a in self.unique_attributes(d) {
                        match (a.key.as_str(), &a.value) {
                            ("description", Literal::Str(s)) => description = s.clone(),
                            ("description", other) => {
                                self.invalid(d, a, other, "a quoted string")
                            }
                            _ => self.unknown_key(d, a),
                        }
                    }
                    model.boundaries.insert(
                        d.name.clone(),
                        TrustBoundary {
                            id: d.name.clone(),
                            description,
                        },
                    );
                }
                DeclKind::Asset => {
                    let mut sensitivity = None;
                    let mut category = AssetCategory::Other;
                    let mut ok = true;
                    for a in self.unique_attributes(d) {
                        match a.key.as_str() {
                            "sensitivity" => match ident_value(&a.value).map(str::parse) {
                                Some(Ok(s)) => sensitivity = Some(s),
                                _ => {
                                    ok = false;
                                    self.invalid(d, a, &a.value, "high, medium or low")
                                }
                            },
                            "category" => match ident_value(&a.value).map(str::parse) {
                                Some(Ok(c)) => category = c,
                                _ => self.invalid(
                                    d,
                                    a,
                                    &a.value,
                                    "credential, crypto_key, session_token, personal_data, measurement or other",
                                ),
                            },
                            _ => self.unknown_key(d, a),
                        }
                    }
                    if sensitivity.is_none() && ok {
                        self.errors.push(ValidationError::MissingAttribute {
                            owner_kind: d.kind,
                            owner: d.name.clone(),
                            key: "sensitivity",
                            span: d.span.clone(),
                        });
                    }
                    model.assets.insert(
                        d.name.clone(),
                        Asset {
                            id: d.name.clone(),
                            sensitivity: sensitivity.unwrap_or(Sensitivity::High),
                            category,
                        },
                    );
                }
                DeclKind::Flow => {
                    let Some((src, dst)) = &d.endpoints else {
                        self.errors.push(ValidationError::MissingAttribute {
                            owner_kind: d.kind,
                            owner: d.name.clone(),
                            key: "endpoints",
                            span: d.span.clone(),
                        });
                        continue;
                    };
                    if !declared(Namespace::Element, &src.name) {
                        self.dangling(d, RefRole::FlowSource, src);
                    }
                    if !declared(Namespace::Element, &dst.name) {
                        self.dangling(d, RefRole::FlowTarget, dst);
                    }
                    if src.name == dst.name && !self.config.allow_self_loops {
                        self.errors.push(ValidationError::SelfLoop {
                            flow: d.name.clone(),
                            element: src.name.clone(),
                            span: dst.span.clone(),
                        });
                    }
                    let mut carries: Vec<String> = Vec::new();
                    for c in &d.carries {
                        if !declared(Namespace::Asset, &c.name) {
                            self.dangling(d, RefRole::CarriedAsset, c);
                        }
                        if !carries.contains(&c.name) {
                            carries.push(c.name.clone());
                        }
                    }
                    let annotations = self.annotations(d, AnnotationScope::Flow);
                    model.flows.insert(
                        d.name.clone(),
                        Flow {
                            id: d.name.clone(),
                            source: src.name.clone(),
                            target: dst.name.clone(),
                            carries,
                            annotations,
                        },
                    );
                }
                DeclKind::Session => {
                    let Some((a, b)) = &d.endpoints else {
                        self.errors.push(ValidationError::MissingAttribute {
                            owner_kind: d.kind,
                            owner: d.name.clone(),
                            key: "endpoints",
                            span: d.span.clone(),
                        });
                        continue;
                    };
                    for e in [a, b] {
                        if !declared(Namespace::Element, &e.name) {
                            self.dangling(d, RefRole::SessionEndpoint, e);
                        }
                    }
                    let annotations = self.annotations(d, AnnotationScope::Session);
                    model.sessions.insert(
                        d.name.clone(),
                        Session {
                            id: d.name.clone(),
                            endpoint_a: a.name.clone(),
                            endpoint_b: b.name.clone(),
                            annotations,
                        },
                    );
                }
            }
        }

        if self.errors.is_empty() {
            Ok(model)
        } else {
            Err(self.errors)
        }
    }

    fn check_clauses(&mut self, d: &Declaration) {
        let misplaced = |what| ValidationError::MisplacedClause {
            owner_kind: d.kind,
            owner: d.name.clone(),
            what,
            span: d.span.clone(),
        };
        if d.boundary.is_some() && !d.kind.is_element() {
            self.errors.push(misplaced("a boundary placement"));
        }
        if d.endpoints.is_some() && !matches!(d.kind, DeclKind::Flow | DeclKind::Session) {
            self.errors.push(misplaced("endpoints"));
        }
        if !d.carries.is_empty() && d.kind != DeclKind::Flow {
            self.errors.push(misplaced("a carries clause"));
        }
        if d.kind == DeclKind::ModelHeader && !d.attributes.is_empty() {
            self.errors.push(misplaced("attributes"));
        }
    }

    /// Attributes with repeated keys reported and dropped.
    fn unique_attributes<'d>(&mut self, d: &'d Declaration) -> Vec<&'d Attribute> {
        let mut out: Vec<&Attribute> = Vec::new();
        for a in &d.attributes {
            if out.iter().any(|b| b.key == a.key) {
                self.errors.push(ValidationError::DuplicateAttribute {
                    owner_kind: d.kind,
                    owner: d.name.clone(),
                    key: a.key.clone(),
                    span: a.span.clone(),
                });
            } else {
                out.push(a);
            }
        }
        out
    }

    fn annotations(&mut self, d: &Declaration, scope: AnnotationScope) -> Annotations {
        let mut out = Annotations::new();
        for a in self.unique_attributes(d) {
            let key = match AnnotationKey::from_name(&a.key) {
                Some(k) if k.scope() == scope => k,
                _ => {
                    self.unknown_key(d, a);
                    continue;
                }
            };
            match a.value {
                Literal::Bool(b) => out.set(key, TriState::from_bool(b)),
                Literal::Unknown => out.set(key, TriState::Unknown),
                ref other => self.invalid(d, a, other, "true, false or unknown"),
            }
        }
        out
    }

    fn dangling(&mut self, d: &Declaration, role: RefRole, r: &NameRef) {
        self.errors.push(ValidationError::DanglingReference {
            owner_kind: d.kind,
            owner: d.name.clone(),
            role,
            missing: r.name.clone(),
            span: r.span.clone(),
        });
    }

    fn unknown_key(&mut self, d: &Declaration, a: &Attribute) {
        self.errors.push(ValidationError::UnknownAnnotationKey {
            owner_kind: d.kind,
            owner: d.name.clone(),
            key: a.key.clone(),
            span: a.span.clone(),
        });
    }

    fn invalid(&mut self, d: &Declaration, a: &Attribute, value: &Literal, expected: &'static str) {
        self.errors.push(ValidationError::InvalidEnumValue {
            owner_kind: d.kind,
            owner: d.name.clone(),
            key: a.key.clone(),
            value: value.to_string(),
            expected,
            span: a.span.clone(),
        });
    }
}

fn ident_value(l: &Literal) -> Option<&str> {
    match l {
        Literal::Ident(s) => Some(s),
        _ => None,
    }
}

impl ArchModel {
    /// Declarations that validate back to this model.
    pub fn to_declarations(&self) -> Vec<Declaration> {
        let mut out = vec![Declaration::new(DeclKind::ModelHeader, self.name.clone())];
        let annotated = |mut d: Declaration, a: &Annotations| {
            for (k, v) in a.iter() {
                d = d.attr(k.name(), Literal::Bool(v));
            }
            d
        };
        for b in self.boundaries.values() {
            let mut d = Declaration::new(DeclKind::Boundary, b.id.clone());
            if !b.description.is_empty() {
                d = d.attr("description", Literal::Str(b.description.clone()));
            }
            out.push(d);
        }
        for a in self.assets.values() {
            out.push(
                Declaration::new(DeclKind::Asset, a.id.clone())
                    .attr("sensitivity", Literal::Ident(a.sensitivity.as_str().into()))
                    .attr("category", Literal::Ident(a.category.as_str().into())),
            );
        }
        for e in self.elements.values() {
            let kind = match e.kind {
                ElementKind::ExternalEntity => DeclKind::Entity,
                ElementKind::Process => DeclKind::Process,
                ElementKind::DataStore => DeclKind::Store,
            };
            let mut d = Declaration::new(kind, e.id.clone());
            if let Some(b) = &e.boundary {
                d = d.in_boundary(b.clone());
            }
            out.push(annotated(d, &e.annotations));
        }
        for f in self.flows.values() {
            let d = Declaration::new(DeclKind::Flow, f.id.clone())
                .between(f.source.clone(), f.target.clone())
                .carrying(f.carries.iter().cloned());
            out.push(annotated(d, &f.annotations));
        }
        for s in self.sessions.values() {
            let d = Declaration::new(DeclKind::Session, s.id.clone())
                .between(s.endpoint_a.clone(), s.endpoint_b.clone());
            out.push(annotated(d, &s.annotations));
        }
        out
    }
}

impl fmt::Display for RefRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RefRole::FlowSource => "flow source",
            RefRole::FlowTarget => "flow target",
            RefRole::SessionEndpoint => "session endpoint",
            RefRole::Boundary => "boundary",
            RefRole::CarriedAsset => "carried asset",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> Vec<Declaration> {
        vec![
            Declaration::new(DeclKind::ModelHeader, "M"),
            Declaration::new(DeclKind::Entity, "E"),
            Declaration::new(DeclKind::Process, "P"),
            Declaration::new(DeclKind::Flow, "f").between("E", "P"),
        ]
    }

    #[test]
    fn minimal_model() {
        let m = validate_model(&minimal()).unwrap();
        assert_eq!(m.element_count(), 2);
        assert_eq!(m.flow_count(), 1);
        assert_eq!(m.name(), "M");
    }

    #[test]
    fn dangling_target() {
        let mut d = minimal();
        d[3] = Declaration::new(DeclKind::Flow, "f").between("E", "Q");
        let errs = validate_model(&d).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].missing_name(), Some("Q"));
        assert_eq!(errs[0].to_string(), "flow 'f' targets undeclared element 'Q'");
    }

    #[test]
    fn misspelled_annotation_rejected() {
        let mut d = minimal();
        d[2] = Declaration::new(DeclKind::Process, "P")
            .attr("is_authntication_point", Literal::Bool(true));
        let errs = validate_model(&d).unwrap_err();
        assert!(matches!(
            &errs[..],
            [ValidationError::UnknownAnnotationKey { key, .. }] if key == "is_authntication_point"
        ));
    }

    #[test]
    fn session_key_on_element_rejected() {
        let mut d = minimal();
        d[2] = Declaration::new(DeclKind::Process, "P").attr("secure_channel", Literal::Bool(true));
        assert!(matches!(
            &validate_model(&d).unwrap_err()[..],
            [ValidationError::UnknownAnnotationKey { .. }]
        ));
    }

    #[test]
    fn collects_every_error() {
        let d = vec![
            Declaration::new(DeclKind::ModelHeader, "M"),
            Declaration::new(DeclKind::Entity, "E"),
            Declaration::new(DeclKind::Entity, "E"),
            Declaration::new(DeclKind::Asset, "a").attr("sensitivity", Literal::Ident("extreme".into())),
            Declaration::new(DeclKind::Asset, "b"),
            Declaration::new(DeclKind::Flow, "f").between("E", "E").carrying(["zz"]),
            Declaration::new(DeclKind::Process, "P").in_boundary("Nowhere"),
        ];
        let errs = validate_model(&d).unwrap_err();
        let kinds: Vec<&str> = errs
            .iter()
            .map(|e| match e {
                ValidationError::DuplicateId { .. } => "dup",
                ValidationError::InvalidEnumValue { .. } => "enum",
                ValidationError::MissingAttribute { .. } => "missing",
                ValidationError::SelfLoop { .. } => "loop",
                ValidationError::DanglingReference { .. } => "dangling",
                _ => "other",
            })
            .collect();
        assert_eq!(kinds, ["dup", "enum", "missing", "loop", "dangling", "dangling"]);
    }

    #[test]
    fn self_loop_allowed_by_config() {
        let d = vec![
            Declaration::new(DeclKind::ModelHeader, "M"),
            Declaration::new(DeclKind::Process, "P"),
            Declaration::new(DeclKind::Flow, "f").between("P", "P"),
        ];
        assert!(validate_model(&d).is_err());
        let cfg = ValidationConfig {
            allow_self_loops: true,
        };
        assert!(validate_model_with(&d, cfg).is_ok());
    }

    #[test]
    fn explicit_unknown_is_absence() {
        let mut d = minimal();
        d[3] = Declaration::new(DeclKind::Flow, "f")
            .between("E", "P")
            .attr("channel_encrypted", Literal::Unknown);
        assert_eq!(validate_model(&d).unwrap(), validate_model(&minimal()).unwrap());
    }

    #[test]
    fn missing_header() {
        let errs = validate_model(&minimal()[1..]).unwrap_err();
        assert!(matches!(errs[0], ValidationError::MissingHeader { .. }));
    }

    #[test]
    fn revalidation_is_idempotent() {
        let mut d = minimal();
        d.push(Declaration::new(DeclKind::Boundary, "B").attr("description", Literal::Str("x".into())));
        d.push(Declaration::new(DeclKind::Asset, "a").attr("sensitivity", Literal::Ident("low".into())));
        d[2] = Declaration::new(DeclKind::Process, "P")
            .in_boundary("B")
            .attr("logs_critical_access", Literal::Bool(false));
        d[3] = Declaration::new(DeclKind::Flow, "f").between("E", "P").carrying(["a"]);
        let m = validate_model(&d).unwrap();
        assert_eq!(validate_model(&m.to_declarations()).unwrap(), m);
    }
}
