//! Compact plane sets, distances, the distance-ratio lower bound and curve families.

mod bound;
mod component;
mod curve;
mod set;

use thiserror::Error;

pub use bound::{local_ratio, lower_bound, LowerBound};
pub use component::{chebyshev_lobatto, point_segment_distance, Component};
pub use curve::{
    curve_node_count, offset_curve, offset_curve_family, validate_curve_family, winding_number,
    CurveCheck, CurveFamily, DiscretizedCurve, FamilyReport, DEFAULT_CURVE_NODES,
    MIN_CURVE_NODES,
};
pub use set::CompactSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("compact set has no components")]
    EmptySet,
    #[error("components {0} and {1} are not disjoint")]
    Overlap(usize, usize),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("point lies on the curve (distance {distance:e})")]
    PointOnCurve { distance: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("margin {margin} too large for component gap {gap}")]
    MarginTooLarge { margin: f64, gap: f64 },
    #[error("distance ratio undefined for a one-component set")]
    UndefinedRatio,
    #[error("no component has nonempty interior")]
    NoInterior,
}
