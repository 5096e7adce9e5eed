//! Scoring findings or analyst reports against a ground truth.

mod files;
mod metrics;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

pub use files::{parse_report, parse_truth, ParseEvalError};
pub use metrics::{
    ii_summary, mean, precision, productivity, recall, IiRow, IiSummary, Measure, MetricsReport,
};

use crate::catalog::{CatalogVersion, MappedId};
use crate::engine::{FindingSet, Verdict};
use crate::model::InspectionTarget;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundTruthEntry {
    pub flaw_id: u32,
    pub catalog_version: CatalogVersion,
    pub location: InspectionTarget,
}

/// The reference flaws for one model under one catalog version.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    pub catalog_version: Option<CatalogVersion>,
    pub entries: Vec<GroundTruthEntry>,
}

/// One reported flaw. Automated findings always carry a location; manual
/// reports may leave it out.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReportItem {
    pub flaw_id: u32,
    pub location: Option<InspectionTarget>,
    /// Flagged as resting on insufficient information.
    pub ii: bool,
}

/// What is being scored: an automated finding set or an analyst report.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub catalog_version: Option<CatalogVersion>,
    pub items: Vec<ReportItem>,
    /// Flaws the analyst suspected but could not place for lack of
    /// information. Missed truth entries of these flaws count as flagged.
    pub ii_notes: BTreeSet<u32>,
    pub hours: Option<f64>,
}

impl From<&FindingSet> for Report {
    fn from(set: &FindingSet) -> Self {
        Report {
            catalog_version: Some(set.catalog_version),
            items: set
                .findings
                .iter()
                .map(|f| ReportItem {
                    flaw_id: f.flaw_id,
                    location: Some(f.location.clone()),
                    ii: f.verdict == Verdict::InsufficientInfo,
                })
                .collect(),
            ii_notes: BTreeSet::new(),
            hours: None,
        }
    }
}

fn map_id(id: u32) -> Option<u32> {
    match crate::catalog::map_flaw_id(id) {
        Ok(MappedId::Moved(new)) => Some(new),
        _ => None,
    }
}

impl Report {
    /// Translates version-1 flaw ids to version 2. Items of the removed flaw
    /// are dropped; items that collapse onto the same flaw and location are
    /// merged, and the merged item is flagged only if all its sources were.
    pub fn map_to_v2(&self) -> Report {
        if self.catalog_version != Some(CatalogVersion::V1) {
            return self.clone();
        }
        let mut items: Vec<ReportItem> = Vec::new();
        let mut seen: HashMap<(u32, InspectionTarget), usize> = HashMap::new();
        for item in &self.items {
            let Some(flaw_id) = map_id(item.flaw_id) else { continue };
            let mapped = ReportItem { flaw_id, ..item.clone() };
            match &mapped.location {
                Some(loc) => match seen.get(&(flaw_id, loc.clone())) {
                    Some(&i) => items[i].ii &= mapped.ii,
                    None => {
                        seen.insert((flaw_id, loc.clone()), items.len());
                        items.push(mapped);
                    }
                },
                None => items.push(mapped),
            }
        }
        Report {
            catalog_version: Some(CatalogVersion::V2),
            items,
            ii_notes: self.ii_notes.iter().filter_map(|&id| map_id(id)).collect(),
            hours: self.hours,
        }
    }
}

impl GroundTruth {
    /// Translates version-1 flaw ids to version 2, dropping the removed flaw
    /// and entries that collapse onto an existing one.
    pub fn map_to_v2(&self) -> GroundTruth {
        if self.catalog_version != Some(CatalogVersion::V1) {
            return self.clone();
        }
        let mut seen = BTreeSet::new();
        let entries = self
            .entries
            .iter()
            .filter_map(|e| {
                let flaw_id = map_id(e.flaw_id)?;
                seen.insert((flaw_id, e.location.clone())).then(|| GroundTruthEntry {
                    flaw_id,
                    catalog_version: CatalogVersion::V2,
                    location: e.location.clone(),
                })
            })
            .collect();
        GroundTruth { catalog_version: Some(CatalogVersion::V2), entries }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedPair {
    pub item: ReportItem,
    pub entry: GroundTruthEntry,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchResult {
    pub tp: Vec<MatchedPair>,
    pub fp: Vec<ReportItem>,
    pub fn_: Vec<GroundTruthEntry>,
    pub ii_tp_count: usize,
    pub ii_fn_count: usize,
    /// Flaws whose misses count as flagged.
    pub ii_notes: BTreeSet<u32>,
}

impl MatchResult {
    /// Flagged true positives and misses per flaw id.
    pub fn ii_by_flaw(&self) -> BTreeMap<u32, (usize, usize)> {
        let mut rows: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        for pair in self.tp.iter().filter(|p| p.item.ii) {
            rows.entry(pair.entry.flaw_id).or_default().0 += 1;
        }
        for entry in self.fn_.iter().filter(|e| self.ii_notes.contains(&e.flaw_id)) {
            rows.entry(entry.flaw_id).or_default().1 += 1;
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("report uses catalog {report} but the ground truth uses catalog {truth}")]
    VersionMismatch {
        report: CatalogVersion,
        truth: CatalogVersion,
    },
}

/// Exact one-to-one matching on (flaw id, location). Each truth entry is
/// consumed by at most one item; later duplicates become false positives.
pub fn diff(report: &Report, truth: &GroundTruth) -> Result<MatchResult, EvalError> {
    if let (Some(r), Some(t)) = (report.catalog_version, truth.catalog_version) {
        if r != t {
            return Err(EvalError::VersionMismatch { report: r, truth: t });
        }
    }
    let mut open: HashMap<(u32, &InspectionTarget), usize> = truth
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.flaw_id, &e.location), i))
        .collect();
    let mut matched = vec![false; truth.entries.len()];
    let mut result = MatchResult { ii_notes: report.ii_notes.clone(), ..Default::default() };
    for item in &report.items {
        let hit = item
            .location
            .as_ref()
            .and_then(|loc| open.remove(&(item.flaw_id, loc)));
        match hit {
            Some(i) => {
                matched[i] = true;
                result.tp.push(MatchedPair { item: item.clone(), entry: truth.entries[i].clone() });
            }
            None => result.fp.push(item.clone()),
        }
    }
    result.fn_ = truth
        .entries
        .iter()
        .zip(&matched)
        .filter(|(_, m)| !**m)
        .map(|(e, _)| e.clone())
        .collect();
    result.ii_tp_count = result.tp.iter().filter(|p| p.item.ii).count();
    result.ii_fn_count = result
        .fn_
        .iter()
        .filter(|e| report.ii_notes.contains(&e.flaw_id))
        .count();
    Ok(result)
}

#[cfg(test)]
mod tests;
