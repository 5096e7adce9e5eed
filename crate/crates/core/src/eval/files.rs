//! Tab-separated ground-truth and analyst-report files.
//!
//! ```text
//! # comment
//! catalog	v1
//! hours	2.5
//! 4	session:s_customer	II	cookie flags not documented
//! 15	-	II	could not tell which flow
//! 7	element:CloudBackend
//! ```

use std::collections::BTreeSet;

use super::{GroundTruth, GroundTruthEntry, Report, ReportItem};
use crate::catalog::CatalogVersion;
use crate::model::InspectionTarget;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseEvalError {
    pub line: usize,
    pub message: String,
}

struct Line<'a> {
    number: usize,
    cols: Vec<&'a str>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            return None;
        }
        Some(Line { number: i + 1, cols: raw.split('\t').map(str::trim).collect() })
    })
}

fn err(line: usize, message: impl Into<String>) -> ParseEvalError {
    ParseEvalError { line, message: message.into() }
}

fn flaw_id(line: &Line) -> Result<u32, ParseEvalError> {
    line.cols[0]
        .parse()
        .map_err(|_| err(line.number, format!("'{}' is not a flaw id", line.cols[0])))
}

fn location(line: &Line) -> Result<Option<InspectionTarget>, ParseEvalError> {
    match line.cols.get(1).copied() {
        None | Some("") => Err(err(line.number, "missing location column")),
        Some("-") => Ok(None),
        Some(s) => InspectionTarget::parse_location_id(s)
            .map(Some)
            .ok_or_else(|| err(line.number, format!("'{s}' is not a location (expected kind:id)"))),
    }
}

/// Handles `catalog` and `hours` directives; returns false for data lines.
fn directive(
    line: &Line,
    version: &mut Option<CatalogVersion>,
    hours: Option<&mut Option<f64>>,
) -> Result<bool, ParseEvalError> {
    match line.cols[0] {
        "catalog" => {
            let v = line.cols.get(1).copied().unwrap_or("");
            *version = Some(v.parse().map_err(|_| err(line.number, format!("unknown catalog version '{v}'")))?);
            Ok(true)
        }
        "hours" => {
            let Some(hours) = hours else {
                return Err(err(line.number, "'hours' is only allowed in report files"));
            };
            let v = line.cols.get(1).copied().unwrap_or("");
            let h: f64 = v
                .parse()
                .ok()
                .filter(|h: &f64| h.is_finite() && *h >= 0.0)
                .ok_or_else(|| err(line.number, format!("'{v}' is not a duration in hours")))?;
            *hours = Some(h);
            Ok(true)
        }
        _ => Ok(false),
    }
}

/// Parses a ground-truth file. Every entry needs a location; a third `II`
/// column is accepted and ignored.
pub fn parse_truth(text: &str) -> Result<GroundTruth, ParseEvalError> {
    let mut version = None;
    let mut raw = Vec::new();
    for line in lines(text) {
        if directive(&line, &mut version, None)? {
            continue;
        }
        let id = flaw_id(&line)?;
        let loc = location(&line)?.ok_or_else(|| err(line.number, "ground-truth entries need a location"))?;
        match line.cols.get(2).copied() {
            None | Some("") | Some("II") => {}
            Some(other) => return Err(err(line.number, format!("unexpected column '{other}'"))),
        }
        if line.cols.len() > 3 {
            return Err(err(line.number, "too many columns"));
        }
        raw.push((line.number, id, loc));
    }
    let catalog_version = version.unwrap_or(CatalogVersion::V2);
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for (number, flaw_id, location) in raw {
        if !seen.insert((flaw_id, location.clone())) {
            return Err(err(number, format!("duplicate entry for flaw {flaw_id} at {location}")));
        }
        entries.push(GroundTruthEntry { flaw_id, catalog_version, location });
    }
    Ok(GroundTruth { catalog_version: Some(catalog_version), entries })
}

/// Parses an analyst report. The third column is the `II` flag when it
/// reads `II` (or is empty); anything else there is taken as the note.
/// A location of `-` with the flag records a flaw the analyst could not
/// place; without the flag it is an unplaceable report and scores as a
/// false positive.
pub fn parse_report(text: &str) -> Result<Report, ParseEvalError> {
    let mut report = Report::default();
    let mut version = None;
    for line in lines(text) {
        if directive(&line, &mut version, Some(&mut report.hours))? {
            continue;
        }
        let flaw_id = flaw_id(&line)?;
        let location = location(&line)?;
        let ii = line.cols.get(2).copied() == Some("II");
        match (location, ii) {
            (None, true) => {
                report.ii_notes.insert(flaw_id);
            }
            (location, ii) => report.items.push(ReportItem { flaw_id, location, ii }),
        }
    }
    report.catalog_version = Some(version.unwrap_or(CatalogVersion::V2));
    Ok(report)
}
