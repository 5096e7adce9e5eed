use super::*;

fn entry(v: CatalogVersion, flaw_id: u32, loc: &str) -> GroundTruthEntry {
    GroundTruthEntry {
        flaw_id,
        catalog_version: v,
        location: InspectionTarget::parse_location_id(loc).unwrap(),
    }
}

fn item(flaw_id: u32, loc: &str, ii: bool) -> ReportItem {
    ReportItem { flaw_id, location: InspectionTarget::parse_location_id(loc), ii }
}

fn report(items: Vec<ReportItem>) -> Report {
    Report { catalog_version: Some(CatalogVersion::V2), items, ..Default::default() }
}

fn truth(entries: Vec<GroundTruthEntry>) -> GroundTruth {
    GroundTruth { catalog_version: Some(CatalogVersion::V2), entries }
}

#[test]
fn exact_match_and_location_mismatch() {
    let t = truth(vec![entry(CatalogVersion::V2, 1, "flow:f1")]);
    let m = diff(&report(vec![item(1, "flow:f1", false)]), &t).unwrap();
    assert_eq!((m.tp.len(), m.fp.len(), m.fn_.len()), (1, 0, 0));
    let m = diff(&report(vec![item(1, "flow:f2", false)]), &t).unwrap();
    assert_eq!((m.tp.len(), m.fp.len(), m.fn_.len()), (0, 1, 1));
}

#[test]
fn duplicate_report_lines_match_once() {
    let t = truth(vec![entry(CatalogVersion::V2, 1, "flow:f1")]);
    let m = diff(&report(vec![item(1, "flow:f1", true), item(1, "flow:f1", false)]), &t).unwrap();
    assert_eq!((m.tp.len(), m.fp.len(), m.fn_.len(), m.ii_tp_count), (1, 1, 0, 1));
}

#[test]
fn version_mismatch_is_an_error() {
    let mut r = report(vec![]);
    r.catalog_version = Some(CatalogVersion::V1);
    let err = diff(&r, &truth(vec![])).unwrap_err();
    assert_eq!(err, EvalError::VersionMismatch { report: CatalogVersion::V1, truth: CatalogVersion::V2 });
}

#[test]
fn placeless_ii_note_flags_misses_of_that_flaw() {
    let t = truth(vec![
        entry(CatalogVersion::V2, 6, "flow:f1"),
        entry(CatalogVersion::V2, 6, "flow:f2"),
        entry(CatalogVersion::V2, 4, "element:P"),
    ]);
    let r = parse_report("6\t-\tII\tunclear which channel\n4\t-\t\tsomewhere\n").unwrap();
    let m = diff(&r, &t).unwrap();
    assert_eq!((m.tp.len(), m.fp.len(), m.fn_.len()), (0, 1, 3));
    assert_eq!(m.ii_fn_count, 2);
    assert_eq!(m.ii_by_flaw().get(&6), Some(&(0, 2)));
}

#[test]
fn published_precision_recall_examples() {
    assert_eq!(precision::<f64>(23, 2), Measure::Value(92.0));
    assert_eq!(precision::<f64>(30, 0), Measure::Value(100.0));
    assert_eq!(precision::<f64>(0, 0), Measure::Undefined);
    assert_eq!(recall::<f64>(23, 24), Measure::Value(48.9));
    assert_eq!(recall::<f64>(20, 27), Measure::Value(42.6));
    assert_eq!(recall::<f32>(0, 5), Measure::Value(0.0));
    assert_eq!(recall::<f32>(30, 17).to_string(), "63.8");
}

#[test]
fn productivity_cases() {
    assert_eq!(productivity(10, Some(2.0_f64)), Measure::Value(5.0));
    assert_eq!(productivity(0, Some(3.0_f64)), Measure::Value(0.0));
    assert_eq!(productivity::<f64>(5, None), Measure::Undefined);
    assert_eq!(productivity(5, Some(0.0_f64)), Measure::Undefined);
    // Hours recovered from the published rate and fed back in.
    assert_eq!(productivity(23, Some(23.0_f64 / 9.5)), Measure::Value(9.5));
}

#[test]
fn mean_of_measures() {
    let m = mean(&[Measure::Value(92.0_f64), Measure::Value(89.7), Measure::Value(82.6)]);
    assert!((m.value().unwrap() - 88.1).abs() < 0.05);
    assert_eq!(mean::<f64>(&[]), Measure::Undefined);
    assert_eq!(mean(&[Measure::Value(1.0_f64), Measure::Undefined]), Measure::Undefined);
}

#[test]
fn empty_ii_summary() {
    let s = IiSummary::<f64>::empty();
    assert!(s.rows.is_empty());
    assert_eq!(s.share, Measure::Undefined);
}

#[test]
fn mapping_merges_and_drops() {
    let mut r = Report {
        catalog_version: Some(CatalogVersion::V1),
        items: vec![item(1, "element:P", true), item(2, "element:P", false), item(17, "element:P", false)],
        ii_notes: [12, 17].into(),
        hours: None,
    };
    let mapped = r.map_to_v2();
    assert_eq!(mapped.items, vec![item(1, "element:P", false)]);
    assert_eq!(mapped.ii_notes, [5].into());
    r.items[1].ii = true;
    assert!(r.map_to_v2().items[0].ii);

    let t = GroundTruth {
        catalog_version: Some(CatalogVersion::V1),
        entries: vec![entry(CatalogVersion::V1, 12, "element:P"), entry(CatalogVersion::V1, 11, "element:P")],
    };
    assert_eq!(t.map_to_v2().entries, vec![entry(CatalogVersion::V2, 5, "element:P")]);
}

#[test]
fn file_parsing() {
    let t = parse_truth("# truth\ncatalog\tv1\n1\tflow:f1\n4\tsession:s1\tII\n").unwrap();
    assert_eq!(t.catalog_version, Some(CatalogVersion::V1));
    assert_eq!(t.entries.len(), 2);
    assert_eq!(parse_truth("1\tflow:f1\n").unwrap().catalog_version, Some(CatalogVersion::V2));
    assert_eq!(parse_truth("1\tflow:f1\n1\tflow:f1\n").unwrap_err().line, 2);
    assert_eq!(parse_truth("1\t-\n").unwrap_err().line, 1);
    assert!(parse_truth("x\tflow:f1\n").is_err());
    assert!(parse_truth("1\tpipe:f1\n").is_err());
    assert!(parse_truth("hours\t2\n").is_err());

    let r = parse_report("hours\t2.5\n3\telement:Gateway\tII\tnote\n3\telement:Api\tjust a note\n").unwrap();
    assert_eq!(r.hours, Some(2.5));
    assert!(r.items[0].ii);
    assert!(!r.items[1].ii);
    assert!(parse_report("hours\t-1\n").is_err());
}
