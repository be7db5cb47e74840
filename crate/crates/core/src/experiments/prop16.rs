use serde::{Deserialize, Serialize};

use super::{ExperimentError, StageError};
use crate::geometry::{curve_node_count, CompactSet, Component, CurveFamily, DiscretizedCurve};
use crate::potential::{theta_for_family, DiskGreen};
use crate::Point;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop16Row {
    pub k: usize,
    /// Radius of the circle around the unit disk, `h0 − 2^{−k}`.
    pub outer_radius: f64,
    /// Radius of the circle around the point, `2^{−k−1}`.
    pub inner_radius: f64,
    pub theta: f64,
    /// `max(1/(h0 − 2^{−k}), 1/(h0 − 2^{−k−1}))`.
    pub analytic: f64,
}

fn circle(center: Point, radius: f64) -> Result<DiscretizedCurve, ExperimentError> {
    DiscretizedCurve::circle(center, radius, curve_node_count(std::f64::consts::TAU * radius))
        .map_err(|e| ExperimentError::upstream("prop16", e))
}

/// θ of the unit disk plus the point `h0` over the shrinking circle pairs
/// `|z| = h0 − 2^{−k}`, `|z − h0| = 2^{−k−1}` for `k = 1..=shrink_steps`.
pub fn prop16_limit(h0: f64, shrink_steps: usize) -> Result<Vec<Prop16Row>, ExperimentError> {
    if !(h0 > 1.0) {
        return Err(ExperimentError::InvalidArgument(format!("h0 must exceed 1, got {h0}")));
    }
    let set = CompactSet::new(vec![
        Component::disk(Point::new(0.0, 0.0), 1.0).map_err(|e| ExperimentError::upstream("prop16", e))?,
        Component::point(Point::new(h0, 0.0)).map_err(|e| ExperimentError::upstream("prop16", e))?,
    ])
    .map_err(|e| ExperimentError::upstream("prop16", e))?;
    let green = DiskGreen::new(set, 0).expect("component 0 is a disk");
    let mut rows = Vec::with_capacity(shrink_steps);
    for k in 1..=shrink_steps {
        let step = 0.5f64.powi(k as i32);
        let outer_radius = h0 - step;
        let inner_radius = 0.5 * step;
        if outer_radius <= 1.0 {
            continue;
        }
        let family = CurveFamily::new(vec![
            circle(Point::new(0.0, 0.0), outer_radius)?,
            circle(Point::new(h0, 0.0), inner_radius)?,
        ]);
        let theta = theta_for_family(&green, &family)
            .map_err(|e| ExperimentError::upstream("prop16", StageError::from(e)))?;
        rows.push(Prop16Row {
            k,
            outer_radius,
            inner_radius,
            theta,
            analytic: (1.0 / outer_radius).max(1.0 / (h0 - inner_radius)),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_decreases_to_inverse_h0() {
        let rows = prop16_limit(2.0, 8).unwrap();
        assert_eq!(rows.len(), 8);
        assert!((rows[0].analytic - 2.0 / 3.0).abs() < 1e-15);
        assert!((rows[0].theta - 2.0 / 3.0).abs() < 1e-3);
        for w in rows.windows(2) {
            assert!(w[1].theta < w[0].theta);
        }
        for r in &rows {
            assert!(r.theta >= 0.5);
            assert!(r.theta >= r.analytic - 1e-12);
        }
        assert!(rows[7].theta - 0.5 < 0.01);
    }

    #[test]
    fn rejects_small_h0() {
        assert!(prop16_limit(1.0, 3).is_err());
    }
}
