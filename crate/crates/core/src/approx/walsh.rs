use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{approximation_nodes, target_values, ApproxError, PiecewisePolynomial, DEFAULT_DENSITY};
use crate::fekete::{leja_points, PointConfiguration};
use crate::geometry::{validate_curve_family, CompactSet, CurveFamily, GeometryError};
use crate::Point;

const QUADRATURE_TOL: f64 = 1e-6;
const CHECK_POINTS: usize = 8;

// 8-point Gauss–Legendre on [-1, 1].
const GL_X: [f64; 4] = [0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363];
const GL_W: [f64; 4] = [0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763];

/// Interpolant of `F` at a Leja configuration, with the error bound built
/// from a separating curve family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalshResult {
    pub m: usize,
    pub configuration: PointConfiguration,
    /// Newton-form coefficients on the configuration points.
    pub divided_differences: Vec<Point>,
    /// `λ0·‖F‖_L / (2π·dist(Δ, L))`.
    pub bound_a: f64,
    pub measured_error: f64,
    /// `log ‖q_m‖_L`.
    pub log_q_norm: f64,
    /// `log inf_Δ |q_m|`.
    pub log_q_inf: f64,
    /// `A·‖q_m‖_L / inf_Δ |q_m|`.
    pub bound: f64,
    pub bound_holds: bool,
    /// Largest relative gap between the contour form and the Newton form.
    pub contour_disagreement: f64,
}

impl WalshResult {
    pub fn eval(&self, z: Point) -> Point {
        newton_eval(self.configuration.points(), &self.divided_differences, z)
    }

    /// Monomial coefficients, ascending degree.
    pub fn coefficients(&self) -> Vec<Point> {
        let x = self.configuration.points();
        let c = &self.divided_differences;
        let mut out = vec![Point::new(0.0, 0.0); c.len()];
        for i in (0..c.len()).rev() {
            // out ← out·(z − x_i) + c_i
            for k in (1..c.len()).rev() {
                out[k] = out[k - 1] - out[k] * x[i];
            }
            out[0] = -out[0] * x[i];
            out[0] += c[i];
        }
        out
    }
}

fn newton_eval(x: &[Point], c: &[Point], z: Point) -> Point {
    let m = c.len();
    let mut p = c[m - 1];
    for i in (0..m - 1).rev() {
        p = p * (z - x[i]) + c[i];
    }
    p
}

fn divided_differences(x: &[Point], y: &[Point]) -> Vec<Point> {
    let mut c = y.to_vec();
    for j in 1..x.len() {
        for i in (j..x.len()).rev() {
            c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - j]);
        }
    }
    c
}

fn log_abs_q(x: &[Point], z: Point) -> f64 {
    x.iter().map(|xi| (z - xi).norm().ln()).sum()
}

/// `Σ_j (1/2πi) ∮_{δ_j} p_j(z)/q(z) · (q(w) − q(z))/(w − z) dz`, with every
/// polyline segment integrated by Gauss–Legendre.
fn contour_form(f: &PiecewisePolynomial, family: &CurveFamily, x: &[Point], w: Point) -> Point {
    let mut total = Point::new(0.0, 0.0);
    for (j, curve) in family.curves().iter().enumerate() {
        for (a, b) in curve.segments() {
            let mid = (a + b) * 0.5;
            let half = (b - a) * 0.5;
            for k in 0..8 {
                let (t, wt) = if k < 4 { (GL_X[k], GL_W[k]) } else { (-GL_X[k - 4], GL_W[k - 4]) };
                let z = mid + half * t;
                let ratio: Point = x.iter().map(|xi| (w - xi) / (z - xi)).product();
                total += f.eval(j, z) / (w - z) * (ratio - 1.0) * half * wt;
            }
        }
    }
    total / Point::new(0.0, 2.0 * PI)
}

/// Degree-`(m − 1)` interpolant of `F` at the first `m` Leja points of `L`.
///
/// `family` must hold one valid curve per component, in component order.
pub fn walsh_interpolant(
    f: &PiecewisePolynomial,
    set: &CompactSet,
    family: &CurveFamily,
    m: usize,
) -> Result<WalshResult, ApproxError> {
    f.check_against(set)?;
    if m < 2 {
        return Err(ApproxError::InvalidArgument(format!("m must be at least 2, got {m}")));
    }
    let report = validate_curve_family(set, family);
    if !report.passed {
        return Err(GeometryError::InvalidCurve(format!(
            "curve family is not admissible: {}",
            report.violations.join("; ")
        ))
        .into());
    }

    let configuration = leja_points(set, m, None)?;
    let x = configuration.points().to_vec();
    let y: Vec<Point> = x.iter().map(|&p| f.eval(set.nearest_component(p), p)).collect();
    let dd = divided_differences(&x, &y);

    let nodes = approximation_nodes(set, DEFAULT_DENSITY)?;
    let values = target_values(f, &nodes);
    let f_norm = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let measured_error = nodes
        .iter()
        .zip(&values)
        .map(|(n, v)| (v - newton_eval(&x, &dd, n.point)).norm())
        .fold(0.0, f64::max);
    let log_q_norm = nodes
        .iter()
        .map(|n| log_abs_q(&x, n.point))
        .fold(f64::NEG_INFINITY, f64::max);
    let log_q_inf = family
        .nodes()
        .map(|z| log_abs_q(&x, z))
        .fold(f64::INFINITY, f64::min);
    let bound_a = family.length() * f_norm / (2.0 * PI * family.distance_to_set(set));
    let bound = bound_a * (log_q_norm - log_q_inf).exp();

    let step = (nodes.len() / CHECK_POINTS).max(1);
    let mut contour_disagreement: f64 = 0.0;
    for n in nodes.iter().step_by(step) {
        let direct = newton_eval(&x, &dd, n.point);
        let contour = contour_form(f, family, &x, n.point);
        contour_disagreement = contour_disagreement.max((direct - contour).norm() / f_norm.max(direct.norm()));
    }
    if contour_disagreement > QUADRATURE_TOL {
        return Err(ApproxError::QuadratureDisagreement {
            relative: contour_disagreement,
        });
    }

    Ok(WalshResult {
        m,
        configuration,
        divided_differences: dd,
        bound_a,
        measured_error,
        log_q_norm,
        log_q_inf,
        bound,
        bound_holds: measured_error <= bound,
        contour_disagreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{offset_curve_family, Component};

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    fn disk_point() -> CompactSet {
        CompactSet::new(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::point(c(2.0, 0.0)).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn reproduces_low_degree_polynomials() {
        let set = disk_point();
        let family = offset_curve_family(&set, 0.3).unwrap();
        let f = PiecewisePolynomial::global(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 2);
        let r = walsh_interpolant(&f, &set, &family, 3).unwrap();
        assert!(r.measured_error < 1e-10);
        let coeffs = r.coefficients();
        assert!((coeffs[2] - c(1.0, 0.0)).norm() < 1e-10);
        assert!(coeffs[0].norm() < 1e-10 && coeffs[1].norm() < 1e-10);
    }

    #[test]
    fn interpolates_and_obeys_bound() {
        let set = disk_point();
        let family = offset_curve_family(&set, 0.3).unwrap();
        let f = PiecewisePolynomial::from_real(&[&[0.0], &[1.0]]).unwrap();
        for m in [2, 5, 12, 25] {
            let r = walsh_interpolant(&f, &set, &family, m).unwrap();
            for &p in r.configuration.points() {
                let want = f.eval(set.nearest_component(p), p);
                assert!((r.eval(p) - want).norm() < 1e-9);
            }
            assert!(r.bound_holds, "m = {m}: {} > {}", r.measured_error, r.bound);
            assert!(r.contour_disagreement < 1e-6);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let set = disk_point();
        let family = offset_curve_family(&set, 0.3).unwrap();
        let f = PiecewisePolynomial::from_real(&[&[0.0], &[1.0]]).unwrap();
        assert!(walsh_interpolant(&f, &set, &family, 1).is_err());
        let short = CurveFamily::new(family.curves()[..1].to_vec());
        assert!(walsh_interpolant(&f, &set, &short, 4).is_err());
    }
}
