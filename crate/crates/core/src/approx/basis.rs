use serde::{Deserialize, Serialize};

use super::ApproxError;
use crate::Point;

/// Discrete orthonormal polynomials built by multiplying by `z` and
/// re-orthogonalizing, with the recurrence coefficients kept for evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArnoldiBasis {
    /// Column `k` holds `h_{0,k}, …, h_{k+1,k}`.
    hessenberg: Vec<Vec<Point>>,
}

fn dot(a: &[Point], b: &[Point]) -> Point {
    let s: Point = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    s / a.len() as f64
}

impl ArnoldiBasis {
    /// Basis of degree `degree` on `points`, orthonormal for the mean inner
    /// product over the points. Returns the basis and the columns
    /// `q_0, …, q_degree` evaluated at the points.
    pub fn build(points: &[Point], degree: usize) -> Result<(Self, Vec<Vec<Point>>), ApproxError> {
        let m = points.len();
        if degree + 1 > m {
            return Err(ApproxError::DegreeExceedsNodes { degree, nodes: m });
        }
        let mut q: Vec<Vec<Point>> = vec![vec![Point::new(1.0, 0.0); m]];
        let mut hessenberg = Vec::with_capacity(degree);
        for k in 0..degree {
            let mut v: Vec<Point> = points.iter().zip(&q[k]).map(|(z, x)| z * x).collect();
            let mut h = vec![Point::new(0.0, 0.0); k + 2];
            for _ in 0..2 {
                for (j, qj) in q.iter().enumerate() {
                    let c = dot(qj, &v);
                    h[j] += c;
                    for (vi, qi) in v.iter_mut().zip(qj) {
                        *vi -= c * qi;
                    }
                }
            }
            let norm = dot(&v, &v).re.sqrt();
            if !(norm > 1e-13 * points.iter().map(|z| z.norm()).fold(1.0, f64::max)) {
                return Err(ApproxError::DegreeExceedsNodes { degree, nodes: m });
            }
            h[k + 1] = Point::new(norm, 0.0);
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            q.push(v);
            hessenberg.push(h);
        }
        Ok((ArnoldiBasis { hessenberg }, q))
    }

    pub fn degree(&self) -> usize {
        self.hessenberg.len()
    }

    /// The basis restricted to degree `n`.
    pub fn truncated(&self, n: usize) -> Self {
        ArnoldiBasis {
            hessenberg: self.hessenberg[..n.min(self.degree())].to_vec(),
        }
    }

    /// `q_0(z), …, q_n(z)` from the recurrence.
    pub fn eval_all(&self, z: Point) -> Vec<Point> {
        let mut w = Vec::with_capacity(self.degree() + 1);
        w.push(Point::new(1.0, 0.0));
        for (k, h) in self.hessenberg.iter().enumerate() {
            let mut v = z * w[k];
            for j in 0..=k {
                v -= h[j] * w[j];
            }
            w.push(v / h[k + 1]);
        }
        w
    }

    /// `Σ c_k q_k(z)`.
    pub fn eval(&self, coefficients: &[Point], z: Point) -> Point {
        self.eval_all(z)
            .iter()
            .zip(coefficients)
            .map(|(q, c)| q * c)
            .sum()
    }
}

/// Largest entry of `G − I` for the mean-inner-product Gram matrix of `columns`.
pub fn gram_deviation(columns: &[Vec<Point>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in columns.iter().enumerate() {
        for (j, b) in columns.iter().enumerate() {
            let g = dot(a, b);
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn orthonormal_on_two_circles() {
        let mut pts: Vec<Point> = (0..400)
            .map(|k| Point::from_polar(1.0, TAU * k as f64 / 400.0))
            .collect();
        pts.extend((0..400).map(|k| Point::new(4.0, 0.0) + Point::from_polar(1.0, TAU * k as f64 / 400.0)));
        let (basis, q) = ArnoldiBasis::build(&pts, 60).unwrap();
        assert!(gram_deviation(&q) < 1e-8);
        // The recurrence reproduces the stored columns.
        for i in [0, 123, 777] {
            let w = basis.eval_all(pts[i]);
            for k in 0..=60 {
                assert!((w[k] - q[k][i]).norm() < 1e-8 * (1.0 + q[k][i].norm()));
            }
        }
    }

    #[test]
    fn degree_limited_by_nodes() {
        let pts = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
        assert!(ArnoldiBasis::build(&pts, 2).is_ok());
        assert!(matches!(
            ArnoldiBasis::build(&pts, 3),
            Err(ApproxError::DegreeExceedsNodes { .. })
        ));
    }
}
