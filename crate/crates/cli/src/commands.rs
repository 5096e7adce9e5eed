use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use archflaw_core::catalog::Catalog;
use archflaw_core::dsl::render_diagnostics;
use archflaw_core::eval::{diff, parse_report, parse_truth, Report};
use archflaw_core::{
    detect, detect_parallel, load_model, render_findings, ArchModel, CatalogVersion, FindingSet,
    MetricsReport64, OutputFormat,
};

use crate::args::{AnalyzeArgs, CatalogAction, EvalArgs};

pub const CATALOG_DIR_VAR: &str = "ARCHFLAW_CATALOG_DIR";

/// Exit statuses.
pub const OK: u8 = 0;
pub const VIOLATIONS: u8 = 1;
pub const INSUFFICIENT_ONLY: u8 = 2;
pub const FAILURE: u8 = 3;

/// Command output: what goes to stdout and the exit status.
pub struct Outcome {
    pub stdout: String,
    pub status: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, status: OK }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Loads a model; on failure the diagnostics are returned as the error.
fn model_from(path: &Path) -> Result<std::result::Result<ArchModel, String>> {
    let text = read(path)?;
    Ok(load_model(&path.display().to_string(), &text).map_err(render_diagnostics))
}

pub fn catalog(version: CatalogVersion) -> Result<Catalog> {
    match std::env::var_os(CATALOG_DIR_VAR).filter(|v| !v.is_empty()) {
        Some(dir) => Catalog::load_from_dir(Path::new(&dir), version)
            .with_context(|| format!("loading catalog from {CATALOG_DIR_VAR}")),
        None => Ok(Catalog::builtin(version).clone()),
    }
}

pub fn validate(path: &Path) -> Result<Outcome> {
    match model_from(path)? {
        Ok(m) => Ok(Outcome::ok(format!(
            "model OK: {} elements, {} flows\n",
            m.element_count(),
            m.flow_count()
        ))),
        Err(diags) => {
            eprint!("{diags}");
            Ok(Outcome { stdout: String::new(), status: FAILURE })
        }
    }
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Outcome> {
    let catalog = catalog(args.catalog)?;
    let suppress: BTreeSet<u32> = args.suppress.iter().copied().collect();
    if let Some(bad) = suppress.iter().find(|id| !catalog.contains(**id)) {
        bail!("cannot suppress flaw {bad}: catalog {} has flaws 1-{}", args.catalog, catalog.flaws().len());
    }
    let model = match model_from(&args.model)? {
        Ok(m) => m,
        Err(diags) => {
            eprint!("{diags}");
            return Ok(Outcome { stdout: String::new(), status: FAILURE });
        }
    };
    let set = match args.jobs {
        Some(0) => bail!("--jobs must be at least 1"),
        Some(1) => detect(&model, &catalog, &suppress),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("starting worker threads")?
            .install(|| detect_parallel(&model, &catalog, &suppress)),
        None => detect_parallel(&model, &catalog, &suppress),
    };
    let status = if set.violations() > 0 {
        VIOLATIONS
    } else if set.insufficient() > 0 {
        INSUFFICIENT_ONLY
    } else {
        OK
    };
    let rendered = render_findings(&set, args.format);
    let stdout = match &args.out {
        Some(out) => {
            std::fs::write(out, rendered).with_context(|| format!("cannot write {}", out.display()))?;
            String::new()
        }
        None => rendered,
    };
    Ok(Outcome { stdout, status })
}

fn load_report(path: &Path) -> Result<Report> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let set = FindingSet::from_json(&text).with_context(|| format!("in {}", path.display()))?;
        Ok(Report::from(&set))
    } else {
        parse_report(&text).with_context(|| format!("in {}", path.display()))
    }
}

pub fn eval(args: &EvalArgs) -> Result<Outcome> {
    let mut report = load_report(&args.findings)?;
    let mut truth = parse_truth(&read(&args.truth)?).with_context(|| format!("in {}", args.truth.display()))?;
    if args.map_v1_to_v2 {
        report = report.map_to_v2();
        truth = truth.map_to_v2();
    }
    if let Some(h) = args.hours {
        if !(h.is_finite() && h >= 0.0) {
            bail!("--hours must be a non-negative number");
        }
        report.hours = Some(h);
    }
    let matched = diff(&report, &truth)?;
    let metrics = MetricsReport64::from_match(&matched, report.hours);
    let stdout = match args.format {
        OutputFormat::Text => metrics.render_text(),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&metrics)?;
            s.push('\n');
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

pub fn catalog_cmd(action: &CatalogAction) -> Result<Outcome> {
    let mut out = String::new();
    match *action {
        CatalogAction::List { version } => {
            for flaw in catalog(version)?.flaws() {
                writeln!(out, "{:>2}  {}", flaw.id, flaw.name)?;
            }
        }
        CatalogAction::Show { id, version } => {
            let catalog = catalog(version)?;
            let flaw = catalog.flaw(id)?;
            writeln!(out, "FLAW-{} ({}): {}", flaw.id, flaw.version, flaw.name)?;
            writeln!(out, "{}", flaw.description)?;
            writeln!(out, "scope:")?;
            for clause in &flaw.scope.clauses {
                writeln!(out, "  {clause}")?;
            }
            writeln!(out, "questions:")?;
            for q in &flaw.questions {
                let clauses = if q.clauses.is_empty() { String::new() } else { format!(" [{}]", q.clauses.join(", ")) };
                writeln!(out, "  {}{clauses} {}", q.id, q.prompt)?;
                writeln!(out, "      answers yes when {}", q.predicate)?;
                if !q.derived_from.is_empty() {
                    writeln!(out, "      from v1 {}", q.derived_from.join(", "))?;
                }
            }
            let cwe = if flaw.cwe_refs.is_empty() {
                "none".to_string()
            } else {
                flaw.cwe_refs.iter().map(u32::to_string).collect::<Vec<_>>().join(", ")
            };
            writeln!(out, "CWE: {cwe}")?;
            if let Some(note) = &flaw.note {
                writeln!(out, "note: {note}")?;
            }
        }
    }
    Ok(Outcome::ok(out))
}
