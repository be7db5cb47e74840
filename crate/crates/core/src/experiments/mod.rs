//! Scenario library, the lower-bound gate and the two explicit constructions.

mod gate;
mod prop15;
mod prop16;
mod scenario;

use thiserror::Error;

use crate::approx::ApproxError;
use crate::fekete::FeketeError;
use crate::geometry::GeometryError;
use crate::potential::PotentialError;

pub use gate::{gate_theorem, GateReport, GATE_SLACK, INDEPENDENCE_TOL};
pub use prop15::{construction_log_abs, prop15_scenario, InequalityCheck, Prop15Parameters, Prop15Report};
pub use prop16::{prop16_limit, Prop16Row};
pub use scenario::{library_scenario, scenario_library, Scenario};

/// Failure inside one of the numerical stages.
#[derive(Debug, Error)]
pub enum StageError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Fekete(#[from] FeketeError),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("scenario {name}: {reason}")]
    InvalidScenario { name: String, reason: String },
    #[error("inequality {inequality} fails: {detail}")]
    Infeasible { inequality: String, detail: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("scenario {scenario}: {source}")]
    Upstream {
        scenario: String,
        #[source]
        source: StageError,
    },
}

impl ExperimentError {
    pub(crate) fn upstream(scenario: &str, source: impl Into<StageError>) -> Self {
        ExperimentError::Upstream {
            scenario: scenario.to_string(),
            source: source.into(),
        }
    }
}
