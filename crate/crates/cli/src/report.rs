//! Report assembly and output plumbing shared by every subcommand: the
//! echoed run configuration, the human summary on standard output, and the
//! optional data file (`--out`) in CSV or JSON.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;

/// Data file format for `--out`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Format::Csv => write!(f, "csv"),
            Format::Json => write!(f, "json"),
        }
    }
}

/// The run configuration behind a report. It is echoed on standard output
/// and embedded in JSON data files so every result is reproducible from
/// the report alone.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    /// Fock photon-number cutoff per mode (oracle cross-checks).
    pub cutoff: usize,
    /// Radial quadrature order (oracle cross-checks).
    pub radial_order: usize,
    /// Angular quadrature order (oracle cross-checks).
    pub angular_order: usize,
    /// Base seed for randomized suites.
    pub seed: u64,
    /// Worker threads for record batches.
    pub jobs: usize,
    pub format: Format,
    /// Records pass when within `max(error_budget, tolerance_floor)` of
    /// their bound.
    pub tolerance_floor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl RunConfig {
    pub fn human_line(&self) -> String {
        format!(
            "config: command={} cutoff={} radial={} angular={} seed={} jobs={} \
             tolerance=max(budget,{:e}) format={}",
            self.command,
            self.cutoff,
            self.radial_order,
            self.angular_order,
            self.seed,
            self.jobs,
            self.tolerance_floor,
            self.format,
        )
    }
}

/// Everything a subcommand produces: tabular rows for CSV, structured
/// records and a summary object for JSON, human lines for standard output,
/// and the overall verdict that decides the exit code.
pub struct Report {
    /// CSV header matching `csv_rows`; `None` for commands whose output has
    /// no tabular form (their data files are always JSON).
    pub csv_header: Option<&'static str>,
    pub csv_rows: Vec<String>,
    pub records: serde_json::Value,
    pub summary: serde_json::Value,
    pub human: Vec<String>,
    pub all_pass: bool,
}

/// Resolves the data file path: relative paths land inside
/// `$WEHRLAB_OUT_DIR` when that variable is set and non-empty.
pub fn resolve_out(out: Option<PathBuf>) -> Option<PathBuf> {
    let out = out?;
    if out.is_relative() {
        if let Ok(dir) = std::env::var("WEHRLAB_OUT_DIR") {
            if !dir.is_empty() {
                return Some(PathBuf::from(dir).join(out));
            }
        }
    }
    Some(out)
}

/// Prints the human summary and writes the data file, if requested.
pub fn emit(config: &RunConfig, report: &Report, out: Option<&Path>) -> Result<()> {
    println!("{}", config.human_line());
    for line in &report.human {
        println!("{line}");
    }
    let Some(path) = out else { return Ok(()) };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating output directory {}", parent.display()))?;
        }
    }
    let payload = match (config.format, report.csv_header) {
        (Format::Csv, Some(header)) => {
            let mut text = String::from(header);
            text.push('\n');
            for row in &report.csv_rows {
                text.push_str(row);
                text.push('\n');
            }
            text
        }
        // JSON, or a command without a tabular form.
        _ => {
            let mut text = serde_json::to_string_pretty(&json!({
                "config": config,
                "summary": report.summary,
                "records": report.records,
            }))?;
            text.push('\n');
            text
        }
    };
    fs::write(path, payload).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}
