//! Batch runner for the acf-core experiments: scenario loading, CSV tables,
//! SVG plots and run manifests.

pub mod args;
mod commands;
pub mod manifest;
pub mod report;
pub mod svg;

use std::path::{Path, PathBuf};

use acf_core::approx::MAX_DEGREE;
use acf_core::experiments::{library_scenario, scenario_library, ExperimentError, Scenario, StageError};
use acf_core::io::{load_scenario, IoError};
use thiserror::Error;

pub use report::{render_report, ReportOutcome, SummaryRow};

/// Default output root when neither `--out` nor the environment sets one.
pub const DEFAULT_OUT: &str = "acf-out";
/// Environment variable holding the default output root.
pub const OUT_ENV: &str = "ACF_OUT";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, scenario files or output locations (exit 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// A numerical stage failed (exit 3).
    #[error("numerical failure in {module}: {message}")]
    Numeric { module: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric { .. } => 3,
        }
    }

    fn write(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Config(format!("cannot write {}: {e}", path.display()))
    }
}

fn stage_module(e: &StageError) -> &'static str {
    match e {
        StageError::Geometry(_) => "geometry",
        StageError::Potential(_) => "potential",
        StageError::Approx(_) => "approx",
        StageError::Fekete(_) => "fekete",
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::InvalidScenario { .. }
            | ExperimentError::InvalidArgument(_)
            | ExperimentError::Infeasible { .. } => CliError::Config(e.to_string()),
            ExperimentError::Upstream { ref source, .. } => CliError::Numeric {
                module: stage_module(source),
                message: e.to_string(),
            },
        }
    }
}

macro_rules! stage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                let s = StageError::from(e);
                CliError::Numeric { module: stage_module(&s), message: s.to_string() }
            }
        }
    )*};
}

stage_from!(
    acf_core::geometry::GeometryError,
    acf_core::potential::PotentialError,
    acf_core::approx::ApproxError,
    acf_core::fekete::FeketeError
);

/// Scenario overrides from the command line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub degree_max: Option<usize>,
    pub margin: Option<f64>,
    pub density: Option<f64>,
    pub window: Option<(usize, usize)>,
    pub seed: Option<u64>,
}

impl Overrides {
    /// Range checks that do not need a scenario.
    pub fn check(&self) -> Result<(), CliError> {
        if let Some(d) = self.degree_max {
            if d > MAX_DEGREE {
                return Err(CliError::Config(format!("--degree-max {d} exceeds {MAX_DEGREE}")));
            }
        }
        if let Some(m) = self.margin {
            if !(m > 0.0 && m.is_finite()) {
                return Err(CliError::Config(format!("--margin must be positive, got {m}")));
            }
        }
        if let Some(d) = self.density {
            if !(d >= 16.0 && d.is_finite()) {
                return Err(CliError::Config(format!("--density must be at least 16, got {d}")));
            }
        }
        if let Some((lo, hi)) = self.window {
            if lo >= hi {
                return Err(CliError::Config(format!("--window {lo},{hi} is empty")));
            }
        }
        Ok(())
    }

    pub fn apply(&self, s: &mut Scenario) {
        if let Some(d) = self.degree_max {
            s.degree_max = d;
            if s.window.1 > d {
                s.window.1 = d;
            }
        }
        if let Some(m) = self.margin {
            s.curve_margin = m;
        }
        if let Some(d) = self.density {
            s.density = d;
        }
        if let Some(w) = self.window {
            s.window = w;
        }
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Bound,
    Green,
    Rho,
    Fekete,
    Approx,
    Prop15 { h0: f64, delta0: f64 },
    Prop16 { h0: f64, steps: usize },
    Gate,
    /// Summarize the manifests under `dir` (the output root when `None`).
    Report { dir: Option<PathBuf> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::Green => "green",
            Command::Rho => "rho",
            Command::Fekete => "fekete",
            Command::Approx => "approx",
            Command::Prop15 { .. } => "prop15",
            Command::Prop16 { .. } => "prop16",
            Command::Gate => "gate",
            Command::Report { .. } => "report",
        }
    }

    fn uses_scenarios(&self) -> bool {
        !matches!(self, Command::Prop15 { .. } | Command::Prop16 { .. } | Command::Report { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Library names or scenario file paths; empty means the whole library.
    pub scenarios: Vec<String>,
    pub out: PathBuf,
    pub overrides: Overrides,
    pub jobs: usize,
}

/// Where a scenario came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Library,
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub source: Source,
}

/// Resolves `--scenario` values: library names first, then file paths.
pub fn resolve_scenarios(names: &[String], overrides: &Overrides) -> Result<Vec<LoadedScenario>, CliError> {
    overrides.check()?;
    let mut out: Vec<LoadedScenario> = if names.is_empty() {
        scenario_library()
            .into_iter()
            .map(|scenario| LoadedScenario {
                scenario,
                source: Source::Library,
            })
            .collect()
    } else {
        names
            .iter()
            .map(|n| {
                if let Some(scenario) = library_scenario(n) {
                    return Ok(LoadedScenario {
                        scenario,
                        source: Source::Library,
                    });
                }
                let path = PathBuf::from(n);
                if !path.exists() {
                    return Err(CliError::Config(format!(
                        "{n} is neither a library scenario nor an existing file"
                    )));
                }
                let scenario = load_scenario(&path).map_err(|e| match e {
                    IoError::Parse(msg) => CliError::Config(format!("{}: {msg}", path.display())),
                    other => CliError::Config(other.to_string()),
                })?;
                Ok(LoadedScenario {
                    scenario,
                    source: Source::File(path),
                })
            })
            .collect::<Result<_, _>>()?
    };
    for l in &mut out {
        overrides.apply(&mut l.scenario);
        l.scenario.validate()?;
    }
    let mut names: Vec<&str> = out.iter().map(|l| l.scenario.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Config(format!("scenario name {} appears twice", w[0])));
    }
    Ok(out)
}

/// What a run produced.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOutcome {
    /// Files written, relative to the command directory.
    pub files: Vec<PathBuf>,
    pub dir: PathBuf,
    /// False when a gate or a checked inequality failed.
    pub passed: bool,
    pub warnings: Vec<String>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed { 0 } else { 1 }
    }
}

/// Runs one command, writing into `<out>/<command>/`.
pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    if config.jobs == 0 {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    if let Command::Report { dir } = &config.command {
        let dir = dir.clone().unwrap_or_else(|| config.out.clone());
        let r = render_report(&dir)?;
        return Ok(RunOutcome {
            files: vec![PathBuf::from(report::SUMMARY_FILE)],
            dir,
            passed: r.rows.iter().all(|row| row.pass),
            warnings: r.warnings,
        });
    }
    let scenarios = if config.command.uses_scenarios() {
        resolve_scenarios(&config.scenarios, &config.overrides)?
    } else {
        config.overrides.check()?;
        Vec::new()
    };
    let dir = config.out.join(config.command.name());
    std::fs::create_dir_all(&dir).map_err(|e| CliError::write(&dir, e))?;
    commands::execute(config, &scenarios, &dir)
}

/// Runs `f` over `items` on up to `jobs` threads; results keep input order.
pub fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<std::sync::Mutex<Option<R>>> = items.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                *results[i].lock().expect("result slot") = Some(r);
            });
        }
    });
    results
        .into_iter()
        .map(|m| m.into_inner().expect("result slot").expect("every item ran"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_map_keeps_order() {
        let items: Vec<usize> = (0..20).collect();
        assert_eq!(parallel_map(&items, 4, |x| x * x), items.iter().map(|x| x * x).collect::<Vec<_>>());
        assert!(parallel_map(&Vec::<usize>::new(), 3, |x| *x).is_empty());
    }

    #[test]
    fn overrides_are_range_checked() {
        assert!(Overrides { degree_max: Some(81), ..Default::default() }.check().is_err());
        assert!(Overrides { density: Some(8.0), ..Default::default() }.check().is_err());
        assert!(Overrides { window: Some((5, 5)), ..Default::default() }.check().is_err());
        assert!(Overrides { margin: Some(0.2), ..Default::default() }.check().is_ok());
    }

    #[test]
    fn unknown_scenario_is_config_error() {
        let e = resolve_scenarios(&["no_such_thing".into()], &Overrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn degree_override_clips_window() {
        let o = Overrides { degree_max: Some(30), ..Default::default() };
        let s = resolve_scenarios(&["disk_point".into()], &o).unwrap();
        assert_eq!(s[0].scenario.window, (15, 30));
    }
}
