use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{GreenFunction, PotentialError};
use crate::geometry::{chebyshev_lobatto, CompactSet, Component};
use crate::optimize::nelder_mead;
use crate::Point;

/// Discretization parameters of the charge-simulation fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GreensParams {
    /// Collocation nodes per unit boundary length.
    pub nodes_per_unit: usize,
    pub charges_per_component: usize,
    /// Charge-curve depth as a fraction of the inradius; `None` picks 0.5 for
    /// disks and 0.3 for polygons.
    pub inset: Option<f64>,
}

impl Default for GreensParams {
    fn default() -> Self {
        GreensParams {
            nodes_per_unit: 64,
            charges_per_component: 64,
            inset: None,
        }
    }
}

/// `g(z) = Σ w_k log|z − q_k| + robin_constant`, vanishing on the fat boundaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreensModel {
    pub charge_points: Vec<Point>,
    pub charge_weights: Vec<f64>,
    pub robin_constant: f64,
    /// Max `|g|` over the collocation nodes.
    pub collocation_residual: f64,
    pub source_set: CompactSet,
    pub params: GreensParams,
    /// Indices of the components carrying charges.
    pub modeled: Vec<usize>,
}

/// Value and gradient of the Green's function at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenValue {
    pub g: f64,
    pub gradient: Point,
}

fn inradius(c: &Component) -> f64 {
    match c {
        Component::Disk { radius, .. } => *radius,
        _ => {
            let z0 = c.reference_point();
            let (lo, hi) = c.bounding_box();
            let m = nelder_mead(
                |x| -c.distance_to_complement(Point::new(x[0], x[1])),
                &[z0.re, z0.im],
                0.1 * (hi - lo).norm(),
                1e-12,
                1e-14,
                2000,
            );
            -m.value
        }
    }
}

/// Points distributed over the polygon edges in proportion to length,
/// Chebyshev-clustered toward the corners.
fn polygon_nodes(vertices: &[Point], count: usize) -> Vec<Point> {
    let n = vertices.len();
    let lengths: Vec<f64> = (0..n)
        .map(|i| (vertices[(i + 1) % n] - vertices[i]).norm())
        .collect();
    let total: f64 = lengths.iter().sum();
    let mut out = Vec::with_capacity(count + n);
    for i in 0..n {
        let k = ((count as f64 * lengths[i] / total).round() as usize).max(2);
        let edge = chebyshev_lobatto(vertices[i], vertices[(i + 1) % n], k + 1);
        out.extend_from_slice(&edge[..k]);
    }
    out
}

/// Charge depth behind a polygon node in units of the local node spacing.
const CORNER_PULL: f64 = 1.0;

/// Charges behind Chebyshev-clustered boundary nodes, pushed inward by the
/// local node spacing (capped at `depth`) so corners get nearby charges.
fn polygon_charges(vertices: &[Point], count: usize, depth: f64) -> Vec<Point> {
    let nodes = polygon_nodes(vertices, count);
    let m = nodes.len();
    let centroid = vertices.iter().sum::<Point>() / vertices.len() as f64;
    (0..m)
        .map(|i| {
            let prev = nodes[(i + m - 1) % m];
            let next = nodes[(i + 1) % m];
            let t = next - prev;
            let mut inward = Point::new(-t.im, t.re) / t.norm();
            if ((centroid - nodes[i]) * inward.conj()).re < 0.0 {
                inward = -inward;
            }
            let spacing = 0.5 * t.norm();
            nodes[i] + inward * (CORNER_PULL * spacing).min(depth)
        })
        .collect()
}

fn charges_for(c: &Component, params: &GreensParams) -> Vec<Point> {
    let n = params.charges_per_component;
    match c {
        Component::Disk { center, radius } => {
            let depth = params.inset.unwrap_or(0.5);
            (0..n)
                .map(|k| center + Point::from_polar(radius * (1.0 - depth), TAU * k as f64 / n as f64))
                .collect()
        }
        Component::ConvexPolygon { vertices } => {
            let depth = params.inset.unwrap_or(0.3) * inradius(c);
            polygon_charges(vertices, n, depth)
        }
        _ => Vec::new(),
    }
}

fn collocation_for(c: &Component, params: &GreensParams) -> Vec<Point> {
    let m = (4 * params.charges_per_component)
        .max((c.boundary_length() * params.nodes_per_unit as f64).ceil() as usize);
    match c {
        Component::Disk { center, radius } => (0..m)
            .map(|k| center + Point::from_polar(*radius, TAU * (k as f64 + 0.5) / m as f64))
            .collect(),
        Component::ConvexPolygon { vertices } => polygon_nodes(vertices, m),
        _ => Vec::new(),
    }
}

/// Fits the Green's function of the complement of the fat components.
///
/// Points and segments carry no charge. A set whose only fat component is a
/// disk gets the exact model `log(|z − c| / r)`.
pub fn fit_greens(set: &CompactSet, params: &GreensParams) -> Result<GreensModel, PotentialError> {
    let fat = set.fat_indices();
    if fat.is_empty() {
        return Err(PotentialError::NoFatComponent);
    }
    if params.charges_per_component < 2 {
        return Err(PotentialError::RankDeficient(
            "need at least two charges per component".into(),
        ));
    }
    if let [j] = fat[..] {
        if let Component::Disk { center, radius } = set.component(j) {
            let mut model = GreensModel {
                charge_points: vec![*center],
                charge_weights: vec![1.0],
                robin_constant: -radius.ln(),
                collocation_residual: 0.0,
                source_set: set.clone(),
                params: params.clone(),
                modeled: vec![j],
            };
            model.collocation_residual = collocation_for(set.component(j), params)
                .iter()
                .map(|&x| model.raw(x).abs())
                .fold(0.0, f64::max);
            return Ok(model);
        }
    }

    let mut charges = Vec::new();
    let mut nodes = Vec::new();
    for &j in &fat {
        charges.extend(charges_for(set.component(j), params));
        nodes.extend(collocation_for(set.component(j), params));
    }
    let scale = set.extent();
    for i in 0..charges.len() {
        for k in i + 1..charges.len() {
            if (charges[i] - charges[k]).norm() <= 1e-14 * scale {
                return Err(PotentialError::RankDeficient(format!(
                    "charges {i} and {k} coincide"
                )));
            }
        }
    }
    let nq = charges.len();
    let last = charges[nq - 1];
    // Unknowns: w_0 … w_{nq-2} (w_{nq-1} eliminated through Σw = 1) and the constant.
    let a = DMatrix::from_fn(nodes.len(), nq, |i, k| {
        if k == nq - 1 {
            1.0
        } else {
            ((nodes[i] - charges[k]) / (nodes[i] - last)).norm().ln()
        }
    });
    let b = DVector::from_iterator(nodes.len(), nodes.iter().map(|x| -(x - last).norm().ln()));
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) || !smax.is_finite() {
        return Err(PotentialError::RankDeficient("zero system matrix".into()));
    }
    let sol = svd
        .solve(&b, 1e-14 * smax)
        .map_err(|e| PotentialError::RankDeficient(e.to_string()))?;
    let mut weights: Vec<f64> = sol.iter().take(nq - 1).copied().collect();
    weights.push(1.0 - weights.iter().sum::<f64>());
    let mut model = GreensModel {
        charge_points: charges,
        charge_weights: weights,
        robin_constant: sol[nq - 1],
        collocation_residual: 0.0,
        source_set: set.clone(),
        params: params.clone(),
        modeled: fat,
    };
    model.collocation_residual = nodes.iter().map(|&x| model.raw(x).abs()).fold(0.0, f64::max);
    if !model.collocation_residual.is_finite() {
        return Err(PotentialError::RankDeficient("non-finite residual".into()));
    }
    log::debug!(
        "greens fit: {} charges, {} nodes, residual {:.3e}",
        nq,
        nodes.len(),
        model.collocation_residual
    );
    Ok(model)
}

impl GreensModel {
    /// Unclamped `Σ w log|z − q| + robin_constant`.
    pub fn raw(&self, z: Point) -> f64 {
        self.charge_points
            .iter()
            .zip(&self.charge_weights)
            .map(|(q, w)| w * (z - q).norm().ln())
            .sum::<f64>()
            + self.robin_constant
    }

    /// `f(z) = Σ w/(z − q)`; the gradient of `g` is its conjugate.
    pub fn field(&self, z: Point) -> Point {
        self.charge_points
            .iter()
            .zip(&self.charge_weights)
            .map(|(q, w)| *w / (z - q))
            .sum()
    }

    /// `(f, f', f'')` at `z`.
    pub fn field_derivatives(&self, z: Point) -> (Point, Point, Point) {
        let mut f = Point::new(0.0, 0.0);
        let mut f1 = Point::new(0.0, 0.0);
        let mut f2 = Point::new(0.0, 0.0);
        for (q, w) in self.charge_points.iter().zip(&self.charge_weights) {
            let u = 1.0 / (z - q);
            let u2 = u * u;
            f += u * *w;
            f1 -= u2 * *w;
            f2 += u2 * u * (2.0 * w);
        }
        (f, f1, f2)
    }

    /// Components with charges, in index order.
    pub fn modeled_components(&self) -> &[usize] {
        &self.modeled
    }

    pub fn capacity(&self) -> f64 {
        (-self.robin_constant).exp()
    }
}

impl GreenFunction for GreensModel {
    fn potential(&self, z: Point) -> f64 {
        self.raw(z)
    }

    fn gradient(&self, z: Point) -> Point {
        self.field(z).conj()
    }

    fn set(&self) -> &CompactSet {
        &self.source_set
    }

    fn is_modeled(&self, j: usize) -> bool {
        self.modeled.contains(&j)
    }
}

/// `g` clamped at zero and its gradient, for `z` off the set.
pub fn eval_greens(model: &GreensModel, z: Point) -> Result<GreenValue, PotentialError> {
    if model.source_set.distance(z) <= 0.0 {
        return Err(PotentialError::InsideSet(z));
    }
    Ok(GreenValue {
        g: model.raw(z).max(0.0),
        gradient: model.gradient(z),
    })
}

/// `e^{−robin_constant}`.
pub fn capacity(model: &GreensModel) -> f64 {
    model.capacity()
}

/// Exact Green's function of one disk component; every other component is
/// treated as polar.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskGreen {
    set: CompactSet,
    index: usize,
    center: Point,
    radius: f64,
}

impl DiskGreen {
    /// Returns `None` unless component `index` is a disk.
    pub fn new(set: CompactSet, index: usize) -> Option<Self> {
        match *set.components().get(index)? {
            Component::Disk { center, radius } => Some(DiskGreen {
                set,
                index,
                center,
                radius,
            }),
            _ => None,
        }
    }
}

impl GreenFunction for DiskGreen {
    fn potential(&self, z: Point) -> f64 {
        ((z - self.center).norm() / self.radius).ln()
    }

    fn gradient(&self, z: Point) -> Point {
        let d = z - self.center;
        d / d.norm_sqr()
    }

    fn set(&self) -> &CompactSet {
        &self.set
    }

    fn is_modeled(&self, j: usize) -> bool {
        j == self.index
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    fn set(components: Vec<Component>) -> CompactSet {
        CompactSet::new(components).unwrap()
    }

    #[test]
    fn unit_disk_is_exact() {
        let l = set(vec![Component::disk(c(0.0, 0.0), 1.0).unwrap()]);
        let m = fit_greens(&l, &GreensParams::default()).unwrap();
        assert_eq!(m.charge_points, vec![c(0.0, 0.0)]);
        assert_eq!(m.charge_weights, vec![1.0]);
        assert_eq!(m.robin_constant, 0.0);
        assert!(m.collocation_residual < 1e-12);
        let v = eval_greens(&m, c(2.0, 0.0)).unwrap();
        assert!((v.g - 2f64.ln()).abs() < 1e-15);
        assert!((eval_greens(&m, c(10.0, 0.0)).unwrap().g - 10f64.ln()).abs() < 1e-6);
        assert!(matches!(eval_greens(&m, c(0.5, 0.0)), Err(PotentialError::InsideSet(_))));
    }

    #[test]
    fn disk_capacity_is_radius() {
        for r in [0.5, 2.0, 3.0] {
            let l = set(vec![Component::disk(c(1.0, -1.0), r).unwrap()]);
            let m = fit_greens(&l, &GreensParams::default()).unwrap();
            assert!((capacity(&m) - r).abs() < 1e-12);
        }
    }

    #[test]
    fn point_component_is_ignored() {
        let p = GreensParams::default();
        let disk = fit_greens(&set(vec![Component::disk(c(0.0, 0.0), 1.0).unwrap()]), &p).unwrap();
        let with_point = fit_greens(
            &set(vec![
                Component::disk(c(0.0, 0.0), 1.0).unwrap(),
                Component::point(c(2.0, 0.0)).unwrap(),
            ]),
            &p,
        )
        .unwrap();
        assert_eq!(disk.charge_points, with_point.charge_points);
        assert_eq!(disk.charge_weights, with_point.charge_weights);
        assert_eq!(disk.robin_constant, with_point.robin_constant);
    }

    #[test]
    fn two_disk_fit_is_symmetric() {
        let l = set(vec![
            Component::disk(c(-2.0, 0.0), 1.0).unwrap(),
            Component::disk(c(2.0, 0.0), 1.0).unwrap(),
        ]);
        let m = fit_greens(&l, &GreensParams::default()).unwrap();
        assert!(m.collocation_residual < 1e-10, "{}", m.collocation_residual);
        assert!((m.charge_weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let a = m.raw(c(0.3, 1.7));
        let b = m.raw(c(-0.3, 1.7));
        assert!((a - b).abs() < 1e-10);
        assert!(m.capacity() > 1.0);
    }

    #[test]
    fn square_fit_is_small_on_boundary() {
        let l = set(vec![
            Component::rectangle(0.0, 0.0, 1.0, 1.0).unwrap(),
            Component::disk(c(4.0, 0.0), 1.0).unwrap(),
        ]);
        let m = fit_greens(&l, &GreensParams::default()).unwrap();
        assert!(m.collocation_residual < 1e-2, "{}", m.collocation_residual);
        for q in &m.charge_points {
            assert!(l.components().iter().any(|k| k.distance_to_complement(*q) > 0.0));
        }
    }

    #[test]
    fn no_fat_component() {
        let l = set(vec![Component::point(c(0.0, 0.0)).unwrap()]);
        assert!(matches!(
            fit_greens(&l, &GreensParams::default()),
            Err(PotentialError::NoFatComponent)
        ));
    }

    #[test]
    fn inradius_of_square() {
        let sq = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        let r = inradius(&Component::polygon(sq.to_vec()).unwrap());
        assert!((r - 0.5).abs() < 1e-9);
    }
}
