use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::annotation::{AnnotationKey, AnnotationScope, Annotations, TriState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    ExternalEntity,
    Process,
    DataStore,
}

impl ElementKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::ExternalEntity => "external_entity",
            ElementKind::Process => "process",
            ElementKind::DataStore => "data_store",
        }
    }
}

impl FromStr for ElementKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "external_entity" => Ok(ElementKind::ExternalEntity),
            "process" => Ok(ElementKind::Process),
            "data_store" => Ok(ElementKind::DataStore),
            other => Err(format!("unknown element kind '{other}'")),
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Asset sensitivity, ordered `Low < Medium < High`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sensitivity {
    Low,
    Medium,
    High,
}

impl Sensitivity {
    pub fn as_str(self) -> &'static str {
        match self {
            Sensitivity::Low => "low",
            Sensitivity::Medium => "medium",
            Sensitivity::High => "high",
        }
    }
}

impl FromStr for Sensitivity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "low" => Ok(Sensitivity::Low),
            "medium" => Ok(Sensitivity::Medium),
            "high" => Ok(Sensitivity::High),
            other => Err(format!("unknown sensitivity '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssetCategory {
    Credential,
    CryptoKey,
    SessionToken,
    PersonalData,
    Measurement,
    Other,
}

impl AssetCategory {
    pub const ALL: [AssetCategory; 6] = [
        AssetCategory::Credential,
        AssetCategory::CryptoKey,
        AssetCategory::SessionToken,
        AssetCategory::PersonalData,
        AssetCategory::Measurement,
        AssetCategory::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AssetCategory::Credential => "credential",
            AssetCategory::CryptoKey => "crypto_key",
            AssetCategory::SessionToken => "session_token",
            AssetCategory::PersonalData => "personal_data",
            AssetCategory::Measurement => "measurement",
            AssetCategory::Other => "other",
        }
    }
}

impl FromStr for AssetCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AssetCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown asset category '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: String,
    pub kind: ElementKind,
    pub boundary: Option<String>,
    pub annotations: Annotations,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub id: String,
    pub source: String,
    pub target: String,
    pub carries: Vec<String>,
    pub annotations: Annotations,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrustBoundary {
    pub id: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Asset {
    pub id: String,
    pub sensitivity: Sensitivity,
    pub category: AssetCategory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub id: String,
    pub endpoint_a: String,
    pub endpoint_b: String,
    pub annotations: Annotations,
}

/// Something that carries annotations and answers closed questions.
pub trait Annotated {
    const SCOPE: AnnotationScope;
    fn annotations(&self) -> &Annotations;
}

impl Annotated for Element {
    const SCOPE: AnnotationScope = AnnotationScope::Element;
    fn annotations(&self) -> &Annotations {
        &self.annotations
    }
}

impl Annotated for Flow {
    const SCOPE: AnnotationScope = AnnotationScope::Flow;
    fn annotations(&self) -> &Annotations {
        &self.annotations
    }
}

impl Annotated for Session {
    const SCOPE: AnnotationScope = AnnotationScope::Session;
    fn annotations(&self) -> &Annotations {
        &self.annotations
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("annotation '{key}' belongs to {expected} items, not {actual} items")]
pub struct KeyKindMismatch {
    pub key: AnnotationKey,
    pub expected: AnnotationScope,
    pub actual: AnnotationScope,
}

/// Reads `key` from `target`. Absent keys read as `Unknown`.
pub fn annotation_lookup<A: Annotated>(
    target: &A,
    key: AnnotationKey,
) -> Result<TriState, KeyKindMismatch> {
    if key.scope() != A::SCOPE {
        return Err(KeyKindMismatch {
            key,
            expected: key.scope(),
            actual: A::SCOPE,
        });
    }
    Ok(target.annotations().get(key))
}

/// A location in the model: the unit findings and ground-truth entries are
/// attached to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum InspectionTarget {
    Element(String),
    Flow(String),
    Session(String),
}

impl InspectionTarget {
    pub fn id(&self) -> &str {
        match self {
            InspectionTarget::Element(id)
            | InspectionTarget::Flow(id)
            | InspectionTarget::Session(id) => id,
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            InspectionTarget::Element(_) => "element",
            InspectionTarget::Flow(_) => "flow",
            InspectionTarget::Session(_) => "session",
        }
    }

    pub fn scope(&self) -> AnnotationScope {
        match self {
            InspectionTarget::Element(_) => AnnotationScope::Element,
            InspectionTarget::Flow(_) => AnnotationScope::Flow,
            InspectionTarget::Session(_) => AnnotationScope::Session,
        }
    }

    /// `kind:id` form used in ground-truth and report files.
    pub fn to_location_id(&self) -> String {
        format!("{}:{}", self.kind_str(), self.id())
    }

    pub fn parse_location_id(s: &str) -> Option<Self> {
        let (kind, id) = s.split_once(':')?;
        if id.is_empty() {
            return None;
        }
        let id = id.to_string();
        match kind {
            "element" => Some(InspectionTarget::Element(id)),
            "flow" => Some(InspectionTarget::Flow(id)),
            "session" => Some(InspectionTarget::Session(id)),
            _ => None,
        }
    }
}

impl fmt::Display for InspectionTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind_str(), self.id())
    }
}

/// A validated data-flow diagram. Items keep declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchModel {
    pub(crate) name: String,
    pub(crate) elements: IndexMap<String, Element>,
    pub(crate) flows: IndexMap<String, Flow>,
    pub(crate) boundaries: IndexMap<String, TrustBoundary>,
    pub(crate) assets: IndexMap<String, Asset>,
    pub(crate) sessions: IndexMap<String, Session>,
}

impl ArchModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.elements.values()
    }

    pub fn flows(&self) -> impl Iterator<Item = &Flow> {
        self.flows.values()
    }

    pub fn boundaries(&self) -> impl Iterator<Item = &TrustBoundary> {
        self.boundaries.values()
    }

    pub fn assets(&self) -> impl Iterator<Item = &Asset> {
        self.assets.values()
    }

    pub fn sessions(&self) -> impl Iterator<Item = &Session> {
        self.sessions.values()
    }

    pub fn element(&self, id: &str) -> Option<&Element> {
        self.elements.get(id)
    }

    pub fn flow(&self, id: &str) -> Option<&Flow> {
        self.flows.get(id)
    }

    pub fn asset(&self, id: &str) -> Option<&Asset> {
        self.assets.get(id)
    }

    pub fn session(&self, id: &str) -> Option<&Session> {
        self.sessions.get(id)
    }

    pub fn boundary(&self, id: &str) -> Option<&TrustBoundary> {
        self.boundaries.get(id)
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn flow_count(&self) -> usize {
        self.flows.len()
    }

    pub fn contains(&self, target: &InspectionTarget) -> bool {
        self.annotations_of(target).is_some()
    }

    pub fn annotations_of(&self, target: &InspectionTarget) -> Option<&Annotations> {
        match target {
            InspectionTarget::Element(id) => self.elements.get(id).map(|e| &e.annotations),
            InspectionTarget::Flow(id) => self.flows.get(id).map(|f| &f.annotations),
            InspectionTarget::Session(id) => self.sessions.get(id).map(|s| &s.annotations),
        }
    }

    /// Every stored annotation as `(item, key, value)`, in declaration order.
    pub fn stored_annotations(&self) -> Vec<(InspectionTarget, AnnotationKey, bool)> {
        let mut out = Vec::new();
        for e in self.elements.values() {
            for (k, v) in e.annotations.iter() {
                out.push((InspectionTarget::Element(e.id.clone()), k, v));
            }
        }
        for f in self.flows.values() {
            for (k, v) in f.annotations.iter() {
                out.push((InspectionTarget::Flow(f.id.clone()), k, v));
            }
        }
        for s in self.sessions.values() {
            for (k, v) in s.annotations.iter() {
                out.push((InspectionTarget::Session(s.id.clone()), k, v));
            }
        }
        out
    }

    /// Copy of the model with one annotation changed. Keys from the wrong
    /// scope are rejected; unknown targets leave the model unchanged.
    pub fn with_annotation(
        &self,
        target: &InspectionTarget,
        key: AnnotationKey,
        value: TriState,
    ) -> Result<ArchModel, KeyKindMismatch> {
        if key.scope() != target.scope() {
            return Err(KeyKindMismatch {
                key,
                expected: key.scope(),
                actual: target.scope(),
            });
        }
        let mut copy = self.clone();
        let slot = match target {
            InspectionTarget::Element(id) => copy.elements.get_mut(id).map(|e| &mut e.annotations),
            InspectionTarget::Flow(id) => copy.flows.get_mut(id).map(|f| &mut f.annotations),
            InspectionTarget::Session(id) => copy.sessions.get_mut(id).map(|s| &mut s.annotations),
        };
        if let Some(a) = slot {
            a.set(key, value);
        }
        Ok(copy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flow_with(annotations: Annotations) -> Flow {
        Flow {
            id: "f1".into(),
            source: "A".into(),
            target: "B".into(),
            carries: vec![],
            annotations,
        }
    }

    #[test]
    fn lookup_stored_and_absent() {
        let mut a = Annotations::new();
        a.set(AnnotationKey::ChannelEncrypted, TriState::No);
        let f = flow_with(a);
        assert_eq!(
            annotation_lookup(&f, AnnotationKey::ChannelEncrypted),
            Ok(TriState::No)
        );
        let bare = flow_with(Annotations::new());
        assert_eq!(
            annotation_lookup(&bare, AnnotationKey::ChannelEncrypted),
            Ok(TriState::Unknown)
        );
    }

    #[test]
    fn lookup_rejects_foreign_key() {
        let e = Element {
            id: "P".into(),
            kind: ElementKind::Process,
            boundary: None,
            annotations: Annotations::new(),
        };
        let err = annotation_lookup(&e, AnnotationKey::SecureChannel).unwrap_err();
        assert_eq!(err.expected, AnnotationScope::Session);
        assert_eq!(err.actual, AnnotationScope::Element);
    }

    #[test]
    fn location_ids() {
        let t = InspectionTarget::Flow("f1".into());
        assert_eq!(t.to_location_id(), "flow:f1");
        assert_eq!(InspectionTarget::parse_location_id("flow:f1"), Some(t));
        assert_eq!(InspectionTarget::parse_location_id("flow:"), None);
        assert_eq!(InspectionTarget::parse_location_id("pipe:x"), None);
        assert_eq!(InspectionTarget::parse_location_id("f1"), None);
    }
}
