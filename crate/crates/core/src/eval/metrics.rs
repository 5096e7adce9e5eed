use std::fmt;

use serde::{Serialize, Serializer};

use super::MatchResult;
use crate::num::{from_tenths, percent_tenths, round_tenths, Scalar};

/// A metric value, or `Undefined` when its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Measure<T = f64> {
    Value(T),
    Undefined,
}

impl<T: Scalar> Measure<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Measure::Value(v) => Some(v),
            Measure::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Measure::Value(_))
    }

    /// Half-up rounding to one decimal.
    pub fn rounded(self) -> Self {
        match self {
            Measure::Value(v) => Measure::Value(round_tenths(v)),
            Measure::Undefined => Measure::Undefined,
        }
    }
}

impl<T: Scalar> fmt::Display for Measure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Value(v) => write!(f, "{:.1}", round_tenths(*v)),
            Measure::Undefined => f.write_str("undefined"),
        }
    }
}

impl<T: Scalar + Serialize> Serialize for Measure<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Measure::Value(v) => v.serialize(s),
            Measure::Undefined => s.serialize_none(),
        }
    }
}

fn percent<T: Scalar>(num: usize, den: usize) -> Measure<T> {
    match percent_tenths(num as u64, den as u64) {
        Some(t) => Measure::Value(from_tenths(t)),
        None => Measure::Undefined,
    }
}

/// `100 * tp / (tp + fp)` to one decimal.
pub fn precision<T: Scalar>(tp: usize, fp: usize) -> Measure<T> {
    percent(tp, tp + fp)
}

/// `100 * tp / (tp + fn)` to one decimal.
pub fn recall<T: Scalar>(tp: usize, fn_: usize) -> Measure<T> {
    percent(tp, tp + fn_)
}

/// True positives per hour to one decimal.
pub fn productivity<T: Scalar>(tp: usize, hours: Option<T>) -> Measure<T> {
    match hours {
        Some(h) if h > T::zero() => Measure::Value(round_tenths(T::from_usize(tp).unwrap() / h)),
        _ => Measure::Undefined,
    }
}

/// Unrounded mean of the given measures; `Undefined` if the slice is empty
/// or any member is undefined.
pub fn mean<T: Scalar>(values: &[Measure<T>]) -> Measure<T> {
    if values.is_empty() {
        return Measure::Undefined;
    }
    let mut sum = T::zero();
    for v in values {
        match v {
            Measure::Value(x) => sum = sum + *x,
            Measure::Undefined => return Measure::Undefined,
        }
    }
    Measure::Value(sum / T::from_usize(values.len()).unwrap())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IiRow {
    pub flaw_id: u32,
    pub tp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IiSummary<T: Scalar = f64> {
    pub rows: Vec<IiRow>,
    pub flagged_tp: usize,
    pub flagged_fn: usize,
    pub flagged: usize,
    /// All true positives and misses across the inputs.
    pub tp_plus_fn: usize,
    pub share: Measure<T>,
}

/// Per-flaw table of flagged true positives and misses over several match
/// results, with the flagged share of all true positives and misses.
pub fn ii_summary<T: Scalar>(results: &[MatchResult]) -> IiSummary<T> {
    let mut table = std::collections::BTreeMap::<u32, (usize, usize)>::new();
    let mut tp_plus_fn = 0;
    for r in results {
        tp_plus_fn += r.tp.len() + r.fn_.len();
        for (flaw, (tp, fn_)) in r.ii_by_flaw() {
            let row = table.entry(flaw).or_default();
            row.0 += tp;
            row.1 += fn_;
        }
    }
    let rows: Vec<IiRow> = table
        .into_iter()
        .map(|(flaw_id, (tp, fn_))| IiRow { flaw_id, tp, fn_, total: tp + fn_ })
        .collect();
    let flagged_tp = rows.iter().map(|r| r.tp).sum();
    let flagged_fn = rows.iter().map(|r| r.fn_).sum();
    let flagged = flagged_tp + flagged_fn;
    IiSummary { rows, flagged_tp, flagged_fn, flagged, tp_plus_fn, share: percent(flagged, tp_plus_fn) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport<T: Scalar = f64> {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: Measure<T>,
    pub recall: Measure<T>,
    pub hours: Option<T>,
    pub productivity: Measure<T>,
    pub ii_share: Measure<T>,
    pub per_flaw_ii: Vec<IiRow>,
}

impl<T: Scalar> MetricsReport<T> {
    pub fn from_match(m: &MatchResult, hours: Option<T>) -> Self {
        Self::from_counts(m.tp.len(), m.fp.len(), m.fn_.len(), hours, ii_summary(std::slice::from_ref(m)))
    }

    /// Metrics from bare counts, as when replaying published tables.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, hours: Option<T>, ii: IiSummary<T>) -> Self {
        MetricsReport {
            tp,
            fp,
            fn_,
            precision: precision(tp, fp),
            recall: recall(tp, fn_),
            hours,
            productivity: productivity(tp, hours),
            ii_share: percent(ii.flagged, tp + fn_),
            per_flaw_ii: ii.rows,
        }
    }

    /// `P=.. R=.. Prod=..` on one line.
    pub fn headline(&self) -> String {
        format!("P={} R={} Prod={}", self.precision, self.recall, self.productivity)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("TP={} FP={} FN={}\n{}\n", self.tp, self.fp, self.fn_, self.headline());
        out.push_str(&format!("II share={}\n", self.ii_share));
        if !self.per_flaw_ii.is_empty() {
            out.push_str("flaw\tII-TP\tII-FN\tsum\n");
            for r in &self.per_flaw_ii {
                out.push_str(&format!("{}\t{}\t{}\t{}\n", r.flaw_id, r.tp, r.fn_, r.total));
            }
        }
        out
    }
}

impl<T: Scalar> IiSummary<T> {
    pub fn empty() -> Self {
        ii_summary(&[])
    }
}
