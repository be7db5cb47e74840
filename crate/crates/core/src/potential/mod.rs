//! Green's function with pole at infinity, capacity, level-curve families and
//! the critical potential.

mod critical;
mod level;
mod model;

use thiserror::Error;

use crate::geometry::{CompactSet, GeometryError};
use crate::Point;

pub use critical::{find_saddles, rho_critical, CriticalSource, RhoCritical, SaddlePoint, Signature};
pub use level::{level_curve_family, theta_descent, theta_for_family, ThetaStep};
pub use model::{capacity, eval_greens, fit_greens, DiskGreen, GreenValue, GreensModel, GreensParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("no component has nonempty interior")]
    NoFatComponent,
    #[error("charge placement is degenerate: {0}")]
    RankDeficient(String),
    #[error("point {0} lies in the compact set")]
    InsideSet(Point),
    #[error("curve family is not admissible: {0}")]
    InvalidFamily(String),
    #[error("level {level} merges components")]
    MergedLevelSet { level: f64 },
    #[error("level-curve tracing failed: {0}")]
    Trace(String),
    #[error("no saddle point separates the components")]
    NoSaddle,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A potential vanishing on the modeled components and growing like `log|z|`.
pub trait GreenFunction {
    /// Unclamped value.
    fn potential(&self, z: Point) -> f64;
    /// Gradient as `∂g/∂x + i ∂g/∂y`.
    fn gradient(&self, z: Point) -> Point;
    fn set(&self) -> &CompactSet;
    /// Whether component `j` is part of the zero set of the potential.
    fn is_modeled(&self, j: usize) -> bool;
}
