//! `manifest.toml`: parameters, input hashes and output hashes of one run.

use std::fs;
use std::path::{Path, PathBuf};

use acf_core::io::scenario_to_toml;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{CliError, LoadedScenario, Source};

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub scenario: String,
    /// `library` or the scenario file path.
    pub source: String,
    /// Hash of the scenario file bytes, for file inputs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file_sha256: Option<String>,
    /// Hash of the effective scenario (after overrides) in canonical TOML.
    pub scenario_sha256: String,
    pub degree_max: usize,
    pub window: [usize; 2],
    pub density: f64,
    pub curve_margin: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub manifest_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub passed: bool,
    pub parameters: toml::Table,
    #[serde(default)]
    pub inputs: Vec<InputRecord>,
    #[serde(default)]
    pub outputs: Vec<OutputRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn input_record(l: &LoadedScenario) -> Result<InputRecord, CliError> {
    let s = &l.scenario;
    let (source, file_sha256) = match &l.source {
        Source::Library => ("library".to_string(), None),
        Source::File(p) => {
            let bytes = fs::read(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            (p.display().to_string(), Some(sha256_hex(&bytes)))
        }
    };
    Ok(InputRecord {
        scenario: s.name.clone(),
        source,
        file_sha256,
        scenario_sha256: sha256_hex(scenario_to_toml(s).as_bytes()),
        degree_max: s.degree_max,
        window: [s.window.0, s.window.1],
        density: s.density,
        curve_margin: s.curve_margin,
        seed: s.seed,
    })
}

impl Manifest {
    pub fn new(command: &str, parameters: toml::Table, inputs: Vec<InputRecord>) -> Self {
        Manifest {
            manifest_version: MANIFEST_VERSION,
            tool: "acf".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            passed: true,
            parameters,
            inputs,
            outputs: Vec::new(),
        }
    }

    /// Hashes `files` (relative to `dir`) and writes the manifest there.
    pub fn finish(mut self, dir: &Path, files: &[PathBuf], passed: bool) -> Result<(), CliError> {
        self.passed = passed;
        self.outputs = files
            .iter()
            .map(|f| {
                let full = dir.join(f);
                let bytes = fs::read(&full).map_err(|e| CliError::write(&full, e))?;
                Ok(OutputRecord {
                    path: f.to_string_lossy().replace('\\', "/"),
                    sha256: sha256_hex(&bytes),
                })
            })
            .collect::<Result<_, CliError>>()?;
        let text = toml::to_string(&self).map_err(|e| CliError::Config(format!("manifest: {e}")))?;
        let path = dir.join(MANIFEST_FILE);
        fs::write(&path, text).map_err(|e| CliError::write(&path, e))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_abc() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.csv"), "x\n1\n").unwrap();
        let mut params = toml::Table::new();
        params.insert("jobs".into(), toml::Value::Integer(1));
        let m = Manifest::new("gate", params, Vec::new());
        m.clone().finish(dir.path(), &[PathBuf::from("a.csv")], false).unwrap();
        let back = Manifest::load(&dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(back.command, "gate");
        assert!(!back.passed);
        assert_eq!(back.outputs.len(), 1);
        assert_eq!(back.outputs[0].sha256, sha256_hex(b"x\n1\n"));
    }
}
