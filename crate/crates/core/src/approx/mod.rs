//! Piecewise-polynomial targets, discrete minimax approximation and ρ estimates.

mod basis;
mod lawson;
mod rho;
mod walsh;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fekete::FeketeError;
use crate::geometry::{CompactSet, GeometryError};
use crate::Point;

pub use basis::{gram_deviation, ArnoldiBasis};
pub use lawson::{dn_sequence, minimax_fit, minimax_fit_on, DnRow, DnSequence, MinimaxResult};
pub use rho::{rho_from_dn, RhoDiagnostic, RhoEstimate, RhoMethod};
pub use walsh::{walsh_interpolant, WalshResult};

/// Largest degree accepted by [`dn_sequence`].
pub const MAX_DEGREE: usize = 80;
/// Default nodes per unit boundary length.
pub const DEFAULT_DENSITY: f64 = 64.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("invalid target function: {0}")]
    InvalidFunction(String),
    #[error("degree {degree} needs more than {nodes} nodes")]
    DegreeExceedsNodes { degree: usize, nodes: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("d_n reaches the rounding floor at n = {n} inside the window")]
    WindowUnderflow { n: usize },
    #[error("contour and divided-difference forms differ by {relative:e} (relative)")]
    QuadratureDisagreement { relative: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Fekete(#[from] FeketeError),
}

/// One polynomial per component, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Point>>", into = "Vec<Vec<Point>>")]
pub struct PiecewisePolynomial {
    pieces: Vec<Vec<Point>>,
}

impl TryFrom<Vec<Vec<Point>>> for PiecewisePolynomial {
    type Error = ApproxError;

    fn try_from(pieces: Vec<Vec<Point>>) -> Result<Self, Self::Error> {
        PiecewisePolynomial::new(pieces)
    }
}

impl From<PiecewisePolynomial> for Vec<Vec<Point>> {
    fn from(f: PiecewisePolynomial) -> Self {
        f.pieces
    }
}

fn trimmed(c: &[Point]) -> &[Point] {
    let len = c.iter().rposition(|x| *x != Point::new(0.0, 0.0)).map_or(0, |i| i + 1);
    &c[..len]
}

impl PiecewisePolynomial {
    /// Pieces must number at least 2 and be pairwise distinct.
    pub fn new(pieces: Vec<Vec<Point>>) -> Result<Self, ApproxError> {
        if pieces.len() < 2 {
            return Err(ApproxError::InvalidFunction(format!(
                "need at least 2 pieces, got {}",
                pieces.len()
            )));
        }
        if pieces.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(ApproxError::InvalidFunction("non-finite coefficient".into()));
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if trimmed(&pieces[i]) == trimmed(&pieces[j]) {
                    return Err(ApproxError::InvalidFunction(format!(
                        "pieces {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(PiecewisePolynomial { pieces })
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real(pieces: &[&[f64]]) -> Result<Self, ApproxError> {
        Self::new(
            pieces
                .iter()
                .map(|p| p.iter().map(|&x| Point::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// The same polynomial on all `components`; the one case that skips the
    /// distinctness check.
    pub fn global(coefficients: Vec<Point>, components: usize) -> Self {
        PiecewisePolynomial {
            pieces: vec![coefficients; components],
        }
    }

    pub fn pieces(&self) -> &[Vec<Point>] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.pieces
            .iter()
            .map(|p| trimmed(p).len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// `p_j(z)` by Horner's rule.
    pub fn eval(&self, j: usize, z: Point) -> Point {
        self.pieces[j]
            .iter()
            .rev()
            .fold(Point::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn check_against(&self, set: &CompactSet) -> Result<(), ApproxError> {
        if self.len() != set.len() {
            return Err(ApproxError::InvalidFunction(format!(
                "{} pieces for {} components",
                self.len(),
                set.len()
            )));
        }
        Ok(())
    }
}

/// A discretization node of `‖·‖_L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub component: usize,
    pub point: Point,
    /// Share of the total node count (uniform).
    pub weight: f64,
}

/// Boundary nodes of every component: circle and polygon samples, segment
/// Chebyshev nodes and isolated points.
pub fn approximation_nodes(set: &CompactSet, density: f64) -> Result<Vec<Node>, ApproxError> {
    if !(density >= 16.0) {
        return Err(ApproxError::InvalidArgument(format!(
            "density must be at least 16 per unit length, got {density}"
        )));
    }
    let samples = set.sample_boundary(density);
    let w = 1.0 / samples.len() as f64;
    Ok(samples
        .into_iter()
        .map(|(component, point)| Node {
            component,
            point,
            weight: w,
        })
        .collect())
}

/// `F` at each node.
pub(crate) fn target_values(f: &PiecewisePolynomial, nodes: &[Node]) -> Vec<Point> {
    nodes.iter().map(|n| f.eval(n.component, n.point)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Component;

    #[test]
    fn pieces_must_differ() {
        assert!(PiecewisePolynomial::from_real(&[&[0.0], &[1.0]]).is_ok());
        assert!(PiecewisePolynomial::from_real(&[&[1.0, 2.0], &[1.0, 2.0, 0.0]]).is_err());
        assert!(PiecewisePolynomial::from_real(&[&[1.0]]).is_err());
        let f = PiecewisePolynomial::from_real(&[&[0.0, 1.0], &[1.0, 0.0, -1.0]]).unwrap();
        assert_eq!(f.eval(1, Point::new(2.0, 0.0)), Point::new(-3.0, 0.0));
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn nodes_of_disk_and_point() {
        let set = CompactSet::new(vec![
            Component::disk(Point::new(0.0, 0.0), 1.0).unwrap(),
            Component::point(Point::new(2.0, 0.0)).unwrap(),
        ])
        .unwrap();
        let nodes = approximation_nodes(&set, 16.0).unwrap();
        assert_eq!(nodes.iter().filter(|n| n.component == 1).count(), 1);
        assert!(nodes.iter().filter(|n| n.component == 0).count() >= 100);
        assert!(approximation_nodes(&set, 8.0).is_err());
    }
}
