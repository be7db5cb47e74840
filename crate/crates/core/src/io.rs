//! Scenario files and CSV tables.
//!
//! A scenario file is TOML:
//!
//! ```toml
//! schema_version = 1
//! name = "disk_point"
//! curve_margin = 0.3
//! degree_max = 40          # optional
//! window = [15, 35]        # optional
//! density = 64.0           # optional
//! seed = 1                 # optional
//! functions = [
//!     [[[0.0, 0.0]], [[1.0, 0.0]]],
//! ]
//!
//! [[components]]
//! kind = "disk"
//! center = [0.0, 0.0]
//! radius = 1.0
//!
//! [[components]]
//! kind = "point"
//! p = [2.0, 0.0]
//! ```
//!
//! Each function lists one coefficient vector per component, ascending
//! degree, complex numbers as `[re, im]`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::{PiecewisePolynomial, DEFAULT_DENSITY};
use crate::experiments::Scenario;
use crate::geometry::{CompactSet, Component};
use crate::potential::GreensParams;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("unsupported schema_version {found} (expected {SCHEMA_VERSION})")]
    SchemaVersion { found: u32 },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn default_degree_max() -> usize {
    40
}

fn default_window() -> (usize, usize) {
    (15, 35)
}

fn default_density() -> f64 {
    DEFAULT_DENSITY
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    schema_version: u32,
    name: String,
    curve_margin: f64,
    #[serde(default = "default_degree_max")]
    degree_max: usize,
    #[serde(default = "default_window")]
    window: (usize, usize),
    #[serde(default = "default_density")]
    density: f64,
    #[serde(default = "default_seed")]
    seed: u64,
    functions: Vec<PiecewisePolynomial>,
    #[serde(default)]
    greens: GreensParams,
    components: Vec<Component>,
}

/// Parses and validates a scenario from TOML text.
pub fn parse_scenario(text: &str) -> Result<Scenario, IoError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(IoError::SchemaVersion {
            found: file.schema_version,
        });
    }
    let set = CompactSet::new(file.components).map_err(|e| IoError::Invalid(e.to_string()))?;
    let s = Scenario {
        name: file.name,
        set,
        functions: file.functions,
        degree_max: file.degree_max,
        window: file.window,
        density: file.density,
        greens_params: file.greens,
        curve_margin: file.curve_margin,
        seed: file.seed,
    };
    s.validate().map_err(|e| IoError::Invalid(e.to_string()))?;
    Ok(s)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text).map_err(|e| match e {
        IoError::Parse(msg) => IoError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// The scenario in file form.
pub fn scenario_to_toml(s: &Scenario) -> String {
    let file = ScenarioFile {
        schema_version: SCHEMA_VERSION,
        name: s.name.clone(),
        curve_margin: s.curve_margin,
        degree_max: s.degree_max,
        window: s.window,
        density: s.density,
        seed: s.seed,
        functions: s.functions.clone(),
        greens: s.greens_params.clone(),
        components: s.set.components().to_vec(),
    };
    toml::to_string(&file).expect("scenario fields serialize")
}

/// Writes `rows` with a header line taken from the field names.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), IoError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| IoError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Rows of a CSV file written by [`write_csv`].
pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, IoError> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().collect::<Result<Vec<T>, _>>().map_err(IoError::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::scenario_library;

    const DISK_POINT: &str = r#"
schema_version = 1
name = "file_disk_point"
curve_margin = 0.3
functions = [
    [[[0.0, 0.0]], [[1.0, 0.0]]],
]

[[components]]
kind = "disk"
center = [0.0, 0.0]
radius = 1.0

[[components]]
kind = "point"
p = [2.0, 0.0]
"#;

    #[test]
    fn parses_minimal_file() {
        let s = parse_scenario(DISK_POINT).unwrap();
        assert_eq!(s.name, "file_disk_point");
        assert_eq!(s.set.len(), 2);
        assert_eq!(s.window, (15, 35));
        assert_eq!(s.greens_params, GreensParams::default());
    }

    #[test]
    fn library_round_trips() {
        for s in scenario_library() {
            let text = scenario_to_toml(&s);
            assert_eq!(parse_scenario(&text).unwrap(), s, "{text}");
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = DISK_POINT.replace("radius = 1.0", "radius = one");
        let e = parse_scenario(&bad).unwrap_err();
        assert!(matches!(e, IoError::Parse(_)));
        assert!(e.to_string().contains("line 12"), "{e}");
        let v2 = DISK_POINT.replace("schema_version = 1", "schema_version = 2");
        assert!(matches!(parse_scenario(&v2), Err(IoError::SchemaVersion { found: 2 })));
        let overlap = DISK_POINT.replace("p = [2.0, 0.0]", "p = [0.5, 0.0]");
        assert!(matches!(parse_scenario(&overlap), Err(IoError::Invalid(_))));
    }
}
