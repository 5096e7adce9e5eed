//! The annotated data-flow diagram and the queries rules run against it.

pub mod annotation;
pub mod graph;
pub mod types;
pub mod validate;

pub use annotation::{AnnotationKey, AnnotationScope, Annotations, TriState};
pub use graph::{asset_paths, crosses_boundary};
pub use types::*;
pub use validate::{
    validate_model, validate_model_with, RefRole, ValidationConfig, ValidationError,
};
