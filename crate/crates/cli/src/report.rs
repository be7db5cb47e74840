//! Consolidated summary over the gate runs below a directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::manifest::{Manifest, MANIFEST_FILE};
use crate::CliError;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const GATE_FILE: &str = "gate.csv";
const MAX_DEPTH: usize = 4;

/// One row of `gate.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRow {
    pub scenario: String,
    pub lower_bound: f64,
    pub rho_critical: Option<f64>,
    /// Slope estimate for the first target function.
    pub rho_minimax: f64,
    /// Smallest slope estimate over all target functions.
    pub rho_minimax_min: f64,
    pub f_spread: f64,
    pub tail_max: Option<f64>,
    /// `rho_minimax_min − lower_bound`.
    pub gap_minimax: f64,
    /// `rho_critical − lower_bound`.
    pub gap_critical: Option<f64>,
    pub independent: bool,
    pub pass: bool,
}

/// One row of `summary.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    /// Run directory relative to the summarized directory.
    pub run: String,
    pub scenario: String,
    pub lower_bound: f64,
    pub rho_critical: Option<f64>,
    pub rho_minimax: f64,
    pub gap_minimax: f64,
    pub gap_critical: Option<f64>,
    pub pass: bool,
}

const SUMMARY_HEADER: [&str; 8] = [
    "run",
    "scenario",
    "lower_bound",
    "rho_critical",
    "rho_minimax",
    "gap_minimax",
    "gap_critical",
    "pass",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportOutcome {
    pub rows: Vec<SummaryRow>,
    pub warnings: Vec<String>,
    pub manifests: usize,
}

fn subdirs(dir: &Path) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .map(|it| it.filter_map(|e| e.ok()).map(|e| e.path()).filter(|p| p.is_dir()).collect())
        .unwrap_or_default();
    out.sort();
    out
}

/// Directories holding a manifest, depth first in sorted order. Child
/// directories without any manifest below them get a warning.
fn find_runs(dir: &Path, depth: usize, runs: &mut Vec<PathBuf>, warnings: &mut Vec<String>) -> bool {
    let mut found = false;
    if dir.join(MANIFEST_FILE).is_file() {
        runs.push(dir.to_path_buf());
        found = true;
    }
    if depth >= MAX_DEPTH {
        return found;
    }
    for sub in subdirs(dir) {
        if !find_runs(&sub, depth + 1, runs, warnings) {
            warnings.push(format!("no {MANIFEST_FILE} in {}", sub.display()));
        } else {
            found = true;
        }
    }
    found
}

fn relative(root: &Path, p: &Path) -> String {
    let rel = p.strip_prefix(root).unwrap_or(p).to_string_lossy().replace('\\', "/");
    if rel.is_empty() { ".".into() } else { rel }
}

/// Writes `<dir>/summary.csv` from every gate manifest below `dir`.
pub fn render_report(dir: &Path) -> Result<ReportOutcome, CliError> {
    if !dir.is_dir() {
        return Err(CliError::Config(format!("{} is not a directory", dir.display())));
    }
    let mut out = ReportOutcome::default();
    let mut runs = Vec::new();
    find_runs(dir, 0, &mut runs, &mut out.warnings);
    if runs.is_empty() {
        out.warnings.push(format!("no {MANIFEST_FILE} found under {}", dir.display()));
    }
    for run in &runs {
        let manifest = match Manifest::load(&run.join(MANIFEST_FILE)) {
            Ok(m) => m,
            Err(e) => {
                out.warnings.push(e);
                continue;
            }
        };
        out.manifests += 1;
        if manifest.command != "gate" {
            continue;
        }
        let gate = run.join(GATE_FILE);
        let rows: Vec<GateRow> = match acf_core::io::read_csv(&gate) {
            Ok(r) => r,
            Err(e) => {
                out.warnings.push(format!("{}: {e}", gate.display()));
                continue;
            }
        };
        for r in rows {
            out.rows.push(SummaryRow {
                run: relative(dir, run),
                scenario: r.scenario,
                lower_bound: r.lower_bound,
                rho_critical: r.rho_critical,
                rho_minimax: r.rho_minimax,
                gap_minimax: r.gap_minimax,
                gap_critical: r.gap_critical,
                pass: r.pass,
            });
        }
    }
    for w in &out.warnings {
        log::warn!("{w}");
    }
    let path = dir.join(SUMMARY_FILE);
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(&path)
        .map_err(|e| CliError::write(&path, e))?;
    wtr.write_record(SUMMARY_HEADER).map_err(|e| CliError::write(&path, e))?;
    for r in &out.rows {
        wtr.serialize(r).map_err(|e| CliError::write(&path, e))?;
    }
    wtr.flush().map_err(|e| CliError::write(&path, e))?;
    Ok(out)
}
