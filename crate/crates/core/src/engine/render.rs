use std::fmt::Write;

use super::FindingSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format '{other}' (expected text or json)")),
        }
    }
}

/// Renders a finding set. Both formats end with a newline and are
/// byte-stable for equal inputs.
pub fn render_findings(set: &FindingSet, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(set).expect("finding sets always serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "findings for model '{}' (catalog {})",
                set.model, set.catalog_version
            );
            for f in &set.findings {
                let _ = writeln!(s, "FLAW-{} [{}] at {}", f.flaw_id, f.verdict.label(), f.location);
            }
            if !set.suppressed.is_empty() {
                let ids: Vec<String> = set.suppressed.iter().map(u32::to_string).collect();
                let _ = writeln!(s, "suppressed: {}", ids.join(", "));
            }
            let _ = writeln!(
                s,
                "{} findings ({} violations, {} insufficient-info)",
                set.findings.len(),
                set.violations(),
                set.insufficient()
            );
            s
        }
    }
}
