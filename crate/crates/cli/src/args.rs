use std::path::PathBuf;

use archflaw_core::{CatalogVersion, OutputFormat};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "archflaw", version, about = "Find security design flaws in data-flow diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a model
    Validate {
        model: PathBuf,
    },
    /// Check a model against the flaw catalog
    Analyze(AnalyzeArgs),
    /// Score findings or an analyst report against a ground truth
    Eval(EvalArgs),
    /// Browse the flaw catalog
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub model: PathBuf,
    #[arg(long, default_value = "v2", value_parser = parse_version)]
    pub catalog: CatalogVersion,
    /// Flaw ids to leave out, comma separated
    #[arg(long, value_delimiter = ',')]
    pub suppress: Vec<u32>,
    #[arg(long, default_value = "text", value_parser = parse_format)]
    pub format: OutputFormat,
    /// Write the findings here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for detection; 1 runs sequentially
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Findings JSON from `analyze --format json`, or a report file
    pub findings: PathBuf,
    pub truth: PathBuf,
    /// Inspection effort, overriding any `hours` line in the report
    #[arg(long)]
    pub hours: Option<f64>,
    /// Translate version-1 flaw ids on both sides to version 2
    #[arg(long)]
    pub map_v1_to_v2: bool,
    #[arg(long, default_value = "text", value_parser = parse_format)]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// One line per flaw
    List {
        #[arg(long, default_value = "v2", value_parser = parse_version)]
        version: CatalogVersion,
    },
    /// Full definition of one flaw
    Show {
        id: u32,
        #[arg(long, default_value = "v2", value_parser = parse_version)]
        version: CatalogVersion,
    },
}

fn parse_version(s: &str) -> Result<CatalogVersion, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse()
}
