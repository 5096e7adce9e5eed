//! The flaw catalog in its two versions, loaded from the TOML data files
//! under `catalog/`.

mod raw;
pub mod spec;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use spec::{Atom, Filter, Predicate, QuestionSpec, ScopeClause, ScopeSpec, Selector, Subject};

const V1_DATA: &str = include_str!("../../../../catalog/v1/flaws.toml");
const V2_DATA: &str = include_str!("../../../../catalog/v2/flaws.toml");

/// Relative path of a version's data file inside a catalog directory.
pub fn data_file(version: CatalogVersion) -> &'static str {
    match version {
        CatalogVersion::V1 => "v1/flaws.toml",
        CatalogVersion::V2 => "v2/flaws.toml",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogVersion {
    V1,
    V2,
}

impl CatalogVersion {
    /// Number of flaws the version defines.
    pub fn flaw_count(self) -> u32 {
        match self {
            CatalogVersion::V1 => 19,
            CatalogVersion::V2 => 9,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogVersion::V1 => "v1",
            CatalogVersion::V2 => "v2",
        }
    }
}

impl FromStr for CatalogVersion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "v1" => Ok(CatalogVersion::V1),
            "v2" => Ok(CatalogVersion::V2),
            other => Err(format!("unknown catalog version '{other}' (expected v1 or v2)")),
        }
    }
}

impl fmt::Display for CatalogVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlawDefinition {
    pub id: u32,
    pub version: CatalogVersion,
    pub name: String,
    pub description: String,
    pub scope: ScopeSpec,
    pub questions: Vec<QuestionSpec>,
    pub cwe_refs: Vec<u32>,
    pub applicable: bool,
    pub note: Option<String>,
}

/// Where a version-1 flaw went in version 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MappedId {
    Moved(u32),
    Removed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdMapping {
    pub old_id: u32,
    pub new_id: Option<u32>,
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog {source_name} is corrupt: {message}")]
    CatalogCorrupt { source_name: String, message: String },
    #[error("cannot read catalog file {path}: {error}")]
    Io {
        path: String,
        #[source]
        error: std::io::Error,
    },
    #[error("catalog {version} has no flaw {id}")]
    UnknownFlaw { version: CatalogVersion, id: u32 },
    #[error("flaw id {0} is outside 1..=19")]
    OutOfRange(u32),
}

/// A loaded, checked catalog version.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    version: CatalogVersion,
    flaws: Vec<FlawDefinition>,
    mapping: Vec<IdMapping>,
}

impl Catalog {
    /// Parses and checks catalog text. `source_name` only labels errors.
    pub fn from_toml(
        version: CatalogVersion,
        source_name: &str,
        text: &str,
    ) -> Result<Catalog, CatalogError> {
        raw::convert(version, text).map_err(|message| CatalogError::CatalogCorrupt {
            source_name: source_name.to_string(),
            message,
        })
    }

    /// The catalog shipped with the crate.
    pub fn builtin(version: CatalogVersion) -> &'static Catalog {
        static V1: OnceLock<Catalog> = OnceLock::new();
        static V2: OnceLock<Catalog> = OnceLock::new();
        let (cell, text) = match version {
            CatalogVersion::V1 => (&V1, V1_DATA),
            CatalogVersion::V2 => (&V2, V2_DATA),
        };
        cell.get_or_init(|| {
            Catalog::from_toml(version, data_file(version), text)
                .expect("shipped catalog data is valid")
        })
    }

    /// Loads `<dir>/v1/flaws.toml` or `<dir>/v2/flaws.toml`.
    pub fn load_from_dir(dir: &Path, version: CatalogVersion) -> Result<Catalog, CatalogError> {
        let path = dir.join(data_file(version));
        let text = std::fs::read_to_string(&path).map_err(|error| CatalogError::Io {
            path: path.display().to_string(),
            error,
        })?;
        Catalog::from_toml(version, &path.display().to_string(), &text)
    }

    pub fn version(&self) -> CatalogVersion {
        self.version
    }

    /// Definitions ordered by id.
    pub fn flaws(&self) -> &[FlawDefinition] {
        &self.flaws
    }

    pub fn flaw(&self, id: u32) -> Result<&FlawDefinition, CatalogError> {
        self.flaws
            .iter()
            .find(|f| f.id == id)
            .ok_or(CatalogError::UnknownFlaw {
                version: self.version,
                id,
            })
    }

    pub fn contains(&self, id: u32) -> bool {
        self.flaws.iter().any(|f| f.id == id)
    }

    pub fn cwe_refs(&self, id: u32) -> Result<&[u32], CatalogError> {
        Ok(&self.flaw(id)?.cwe_refs)
    }

    pub fn question_count(&self, id: u32) -> Result<usize, CatalogError> {
        Ok(self.flaw(id)?.questions.len())
    }

    /// Version-1 to version-2 id table; empty for version 1.
    pub fn id_mapping(&self) -> &[IdMapping] {
        &self.mapping
    }

    /// Translates a version-1 flaw id using this catalog's mapping table.
    pub fn map_flaw_id(&self, old_id: u32) -> Result<MappedId, CatalogError> {
        self.mapping
            .iter()
            .find(|m| m.old_id == old_id)
            .map(|m| m.new_id.map_or(MappedId::Removed, MappedId::Moved))
            .ok_or(CatalogError::OutOfRange(old_id))
    }
}

/// Loads the shipped catalog for `version`.
pub fn load_catalog(version: CatalogVersion) -> Result<Catalog, CatalogError> {
    Catalog::from_toml(
        version,
        data_file(version),
        match version {
            CatalogVersion::V1 => V1_DATA,
            CatalogVersion::V2 => V2_DATA,
        },
    )
}

/// Version-2 id for a version-1 flaw, per the shipped mapping.
pub fn map_flaw_id(old_id: u32) -> Result<MappedId, CatalogError> {
    Catalog::builtin(CatalogVersion::V2).map_flaw_id(old_id)
}

pub fn cwe_refs(version: CatalogVersion, flaw_id: u32) -> Result<Vec<u32>, CatalogError> {
    Ok(Catalog::builtin(version).cwe_refs(flaw_id)?.to_vec())
}

pub fn question_count(version: CatalogVersion, flaw_id: u32) -> Result<usize, CatalogError> {
    Catalog::builtin(version).question_count(flaw_id)
}
