//! Detects security design flaws in annotated data-flow diagrams.
//!
//! A model is written in the `.dfd` language ([`dsl`]), validated into an
//! [`ArchModel`], and checked against a flaw [`catalog`] by the [`engine`].
//! The [`eval`] module scores findings, or a manual report, against a ground
//! truth.
//!
//! ```
//! use std::collections::BTreeSet;
//! use archflaw_core::{detect, load_model, Catalog, CatalogVersion};
//!
//! let model = load_model("toy.dfd", r#"
//!     model "toy" {
//!       entity User
//!       process Api
//!       asset Password { sensitivity: high, category: credential }
//!       flow login: User -> Api carries Password { endpoint_authenticated: false }
//!     }
//! "#).unwrap();
//! let findings = detect(&model, Catalog::builtin(CatalogVersion::V2), &BTreeSet::new());
//! assert!(findings.findings.iter().any(|f| f.flaw_id == 1));
//! ```

pub mod catalog;
pub mod dsl;
pub mod engine;
pub mod eval;
pub mod model;
pub mod num;

pub use catalog::{Catalog, CatalogError, CatalogVersion, FlawDefinition, MappedId};
pub use dsl::Diagnostic;
pub use engine::{detect, detect_parallel, render_findings, Finding, FindingSet, OutputFormat, Verdict};
pub use eval::{diff, GroundTruth, MatchResult, Report};
pub use model::{ArchModel, InspectionTarget, TriState};

pub type Measure32 = eval::Measure<f32>;
pub type Measure64 = eval::Measure<f64>;
pub type MetricsReport32 = eval::MetricsReport<f32>;
pub type MetricsReport64 = eval::MetricsReport<f64>;
pub type IiSummary32 = eval::IiSummary<f32>;
pub type IiSummary64 = eval::IiSummary<f64>;

/// Parses and validates a model, turning every problem into a diagnostic.
pub fn load_model(file: &str, text: &str) -> Result<ArchModel, Vec<Diagnostic>> {
    let decls = dsl::parse_named(file, text).map_err(|errs| errs.iter().map(Diagnostic::from).collect::<Vec<_>>())?;
    model::validate_model(&decls).map_err(|errs| errs.iter().map(Diagnostic::from).collect())
}
