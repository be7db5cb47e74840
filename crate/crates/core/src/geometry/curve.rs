//! Closed polylines, winding numbers and admissible curve families.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::component::{point_segment_distance, segment_segment_distance};
use super::{CompactSet, Component, GeometryError};
use crate::Point;

/// Minimum node count of a discretized Jordan curve.
pub const MIN_CURVE_NODES: usize = 16;

/// Default node count of a generated curve; longer curves get more.
pub const DEFAULT_CURVE_NODES: usize = 256;

/// Nodes per unit length used when scaling long curves.
const CURVE_NODES_PER_UNIT: f64 = 64.0;

/// Node count for a generated curve of the given length (always even).
pub fn curve_node_count(length: f64) -> usize {
    let n = (length * CURVE_NODES_PER_UNIT).ceil() as usize;
    let n = n.max(DEFAULT_CURVE_NODES);
    n + n % 2
}

/// A closed simple polyline; the last node connects back to the first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretizedCurve {
    nodes: Vec<Point>,
}

impl DiscretizedCurve {
    pub fn new(nodes: Vec<Point>) -> Result<Self, GeometryError> {
        if nodes.len() < MIN_CURVE_NODES {
            return Err(GeometryError::InvalidCurve(format!(
                "need at least {MIN_CURVE_NODES} nodes, got {}",
                nodes.len()
            )));
        }
        if nodes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GeometryError::InvalidCurve("non-finite node".into()));
        }
        let curve = DiscretizedCurve { nodes };
        if let Some((i, j)) = curve.self_intersection() {
            return Err(GeometryError::InvalidCurve(format!(
                "segments {i} and {j} intersect"
            )));
        }
        Ok(curve)
    }

    /// Counterclockwise circle with `n` nodes starting at angle zero.
    pub fn circle(center: Point, radius: f64, n: usize) -> Result<Self, GeometryError> {
        Self::new(
            (0..n)
                .map(|k| center + Point::from_polar(radius, TAU * k as f64 / n as f64))
                .collect(),
        )
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.nodes.len();
        (0..n).map(move |i| (self.nodes[i], self.nodes[(i + 1) % n]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Shoelace area; positive for counterclockwise orientation.
    pub fn signed_area(&self) -> f64 {
        0.5 * self
            .segments()
            .map(|(a, b)| a.re * b.im - b.re * a.im)
            .sum::<f64>()
    }

    pub fn reversed(&self) -> DiscretizedCurve {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        DiscretizedCurve { nodes }
    }

    pub fn distance(&self, w: Point) -> f64 {
        self.segments()
            .map(|(a, b)| point_segment_distance(w, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Exact distance from the polyline to a component.
    pub fn distance_to_component(&self, c: &Component) -> f64 {
        self.segments()
            .map(|(a, b)| c.segment_distance(a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn distance_to_curve(&self, other: &DiscretizedCurve) -> f64 {
        let mut best = f64::INFINITY;
        for (a, b) in self.segments() {
            for (c, d) in other.segments() {
                best = best.min(segment_segment_distance(a, b, c, d));
            }
        }
        best
    }

    fn scale(&self) -> f64 {
        self.nodes.iter().map(|z| z.norm()).fold(1.0, f64::max)
    }

    fn self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.nodes.len();
        let seg = |i: usize| (self.nodes[i], self.nodes[(i + 1) % n]);
        for i in 0..n {
            let (a, b) = seg(i);
            let (lo_re, hi_re) = (a.re.min(b.re), a.re.max(b.re));
            let (lo_im, hi_im) = (a.im.min(b.im), a.im.max(b.im));
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = seg(j);
                if c.re.max(d.re) < lo_re
                    || c.re.min(d.re) > hi_re
                    || c.im.max(d.im) < lo_im
                    || c.im.min(d.im) > hi_im
                {
                    continue;
                }
                if segment_segment_distance(a, b, c, d) == 0.0 {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Winding number of a closed polyline around `w` by summed argument increments.
pub fn winding_number(curve: &DiscretizedCurve, w: Point) -> Result<i64, GeometryError> {
    let tol = 1e-12 * curve.scale().max(w.norm());
    let dist = curve.distance(w);
    if dist <= tol {
        return Err(GeometryError::PointOnCurve { distance: dist });
    }
    let total: f64 = curve
        .segments()
        .map(|(a, b)| ((b - w) / (a - w)).arg())
        .sum();
    Ok((total / TAU).round() as i64)
}

/// One Jordan curve per component of an associated compact set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveFamily {
    curves: Vec<DiscretizedCurve>,
}

impl CurveFamily {
    pub fn new(curves: Vec<DiscretizedCurve>) -> Self {
        CurveFamily { curves }
    }

    pub fn curves(&self) -> &[DiscretizedCurve] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// All nodes of all curves.
    pub fn nodes(&self) -> impl Iterator<Item = Point> + '_ {
        self.curves.iter().flat_map(|c| c.nodes().iter().copied())
    }

    /// Total polyline length.
    pub fn length(&self) -> f64 {
        self.curves.iter().map(|c| c.length()).sum()
    }

    /// Minimum distance from the polylines to the set.
    pub fn distance_to_set(&self, set: &CompactSet) -> f64 {
        self.curves
            .iter()
            .flat_map(|curve| set.components().iter().map(|c| curve.distance_to_component(c)))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Boundary of the Minkowski sum of a convex core with a disk of radius `r`,
/// sampled counterclockwise at `n` arc-length-equispaced nodes.
pub(crate) fn rounded_hull(core: &[Point], r: f64, n: usize) -> Vec<Point> {
    enum Piece {
        Line(Point, Point),
        Arc { center: Point, start: f64, sweep: f64 },
    }
    let pieces: Vec<Piece> = if core.len() == 1 {
        vec![Piece::Arc {
            center: core[0],
            start: 0.0,
            sweep: TAU,
        }]
    } else {
        let k = core.len();
        let normal = |i: usize| {
            let d = core[(i + 1) % k] - core[i];
            Point::new(d.im, -d.re) / d.norm()
        };
        let mut out = Vec::with_capacity(2 * k);
        for i in 0..k {
            let ni = normal(i);
            let nj = normal((i + 1) % k);
            out.push(Piece::Line(core[i] + ni * r, core[(i + 1) % k] + ni * r));
            let mut sweep = (nj / ni).arg();
            if sweep <= 0.0 {
                // Segment ends turn by a half revolution.
                sweep += TAU;
            }
            if k == 2 {
                sweep = PI;
            }
            out.push(Piece::Arc {
                center: core[(i + 1) % k],
                start: ni.arg(),
                sweep,
            });
        }
        out
    };
    let lengths: Vec<f64> = pieces
        .iter()
        .map(|p| match p {
            Piece::Line(a, b) => (b - a).norm(),
            Piece::Arc { sweep, .. } => r * sweep,
        })
        .collect();
    let total: f64 = lengths.iter().sum();
    let mut nodes = Vec::with_capacity(n);
    let mut piece = 0;
    let mut offset = 0.0;
    for i in 0..n {
        let s = total * i as f64 / n as f64;
        while piece + 1 < pieces.len() && s > offset + lengths[piece] {
            offset += lengths[piece];
            piece += 1;
        }
        let u = ((s - offset) / lengths[piece]).clamp(0.0, 1.0);
        nodes.push(match &pieces[piece] {
            Piece::Line(a, b) => a + (b - a) * u,
            Piece::Arc { center, start, sweep } => center + Point::from_polar(r, start + sweep * u),
        });
    }
    nodes
}

/// Outward offset of a component boundary at distance `margin`.
pub fn offset_curve(c: &Component, margin: f64) -> Result<DiscretizedCurve, GeometryError> {
    let (core, r) = c.core();
    let radius = r + margin;
    let length = match c {
        Component::Disk { .. } | Component::SinglePoint { .. } => TAU * radius,
        _ => c.boundary_length() + TAU * margin,
    };
    DiscretizedCurve::new(rounded_hull(&core, radius, curve_node_count(length)))
}

/// Offset curves at distance `margin` around every component.
pub fn offset_curve_family(set: &CompactSet, margin: f64) -> Result<CurveFamily, GeometryError> {
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(GeometryError::InvalidArgument(format!(
            "margin must be positive, got {margin}"
        )));
    }
    let gap = set.min_gap();
    if 2.0 * margin >= gap {
        return Err(GeometryError::MarginTooLarge { margin, gap });
    }
    let curves = set
        .components()
        .iter()
        .map(|c| offset_curve(c, margin))
        .collect::<Result<Vec<_>, _>>()?;
    let family = CurveFamily::new(curves);
    let report = validate_curve_family(set, &family);
    if !report.passed {
        return Err(GeometryError::MarginTooLarge { margin, gap });
    }
    Ok(family)
}

/// Per-curve admissibility findings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveCheck {
    pub curve: usize,
    /// Distinct winding numbers around samples of the curve's own component.
    pub own_windings: Vec<i64>,
    /// Distinct winding numbers around nodes of the other curves.
    pub foreign_curve_windings: Vec<i64>,
    /// Distinct winding numbers around samples of the other components.
    pub foreign_component_windings: Vec<i64>,
    pub min_distance_to_set: f64,
}

impl CurveCheck {
    pub fn passed(&self) -> bool {
        self.own_windings == [1]
            && self.foreign_curve_windings.iter().all(|&w| w == 0)
            && self.foreign_component_windings.iter().all(|&w| w == 0)
            && self.min_distance_to_set > 0.0
    }
}

/// Outcome of checking a curve family against a compact set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub checks: Vec<CurveCheck>,
    pub violations: Vec<String>,
    pub passed: bool,
}

/// Points used as witnesses for "the curve encloses this component".
fn component_witnesses(c: &Component) -> Vec<Point> {
    let mut pts = c.sample_boundary(8.0);
    match c {
        Component::Disk { .. } | Component::ConvexPolygon { .. } => pts.push(c.reference_point()),
        Component::Segment { a, b } => {
            pts.push(*a);
            pts.push(*b);
        }
        Component::SinglePoint { .. } => {}
    }
    pts
}

fn distinct(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Checks winding numbers and distances that make `family` admissible for `set`.
pub fn validate_curve_family(set: &CompactSet, family: &CurveFamily) -> FamilyReport {
    let mut violations = Vec::new();
    if set.len() != family.len() {
        violations.push(format!(
            "family has {} curves for {} components",
            family.len(),
            set.len()
        ));
        return FamilyReport {
            checks: Vec::new(),
            violations,
            passed: false,
        };
    }
    let witnesses: Vec<Vec<Point>> = set.components().iter().map(component_witnesses).collect();
    let mut checks = Vec::with_capacity(family.len());
    for (i, curve) in family.curves().iter().enumerate() {
        let mut own = Vec::new();
        for &w in &witnesses[i] {
            match winding_number(curve, w) {
                Ok(k) => own.push(k),
                Err(_) => {
                    violations.push(format!("curve {i} passes through component {i}"));
                    own.push(i64::MIN);
                    break;
                }
            }
        }
        let mut foreign_curves = Vec::new();
        let mut foreign_components = Vec::new();
        for (j, other) in family.curves().iter().enumerate() {
            if j == i {
                continue;
            }
            for &w in other.nodes() {
                match winding_number(curve, w) {
                    Ok(k) => foreign_curves.push(k),
                    Err(_) => {
                        violations.push(format!("curves {i} and {j} touch"));
                        foreign_curves.push(i64::MIN);
                        break;
                    }
                }
            }
            for &w in &witnesses[j] {
                match winding_number(curve, w) {
                    Ok(k) => foreign_components.push(k),
                    Err(_) => {
                        violations.push(format!("curve {i} passes through component {j}"));
                        foreign_components.push(i64::MIN);
                        break;
                    }
                }
            }
        }
        let min_distance_to_set = set
            .components()
            .iter()
            .map(|c| curve.distance_to_component(c))
            .fold(f64::INFINITY, f64::min);
        let check = CurveCheck {
            curve: i,
            own_windings: distinct(own),
            foreign_curve_windings: distinct(foreign_curves),
            foreign_component_windings: distinct(foreign_components),
            min_distance_to_set,
        };
        if check.own_windings != [1] {
            violations.push(format!(
                "curve {i} winds {:?} times around its component",
                check.own_windings
            ));
        }
        if check.foreign_curve_windings.iter().any(|&w| w != 0) {
            violations.push(format!("curve {i} encloses nodes of another curve"));
        }
        if check.foreign_component_windings.iter().any(|&w| w != 0) {
            violations.push(format!("curve {i} encloses another component"));
        }
        if check.min_distance_to_set <= 0.0 {
            violations.push(format!("curve {i} meets the set (distance zero)"));
        }
        checks.push(check);
    }
    let passed = violations.is_empty() && checks.iter().all(CurveCheck::passed);
    FamilyReport {
        checks,
        violations,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    fn unit_circle() -> DiscretizedCurve {
        DiscretizedCurve::circle(c(0.0, 0.0), 1.0, 256).unwrap()
    }

    #[test]
    fn winding_numbers_of_circle() {
        let circle = unit_circle();
        assert_eq!(winding_number(&circle, c(0.0, 0.0)).unwrap(), 1);
        assert_eq!(winding_number(&circle, c(3.0, 0.0)).unwrap(), 0);
        assert_eq!(winding_number(&circle.reversed(), c(0.0, 0.0)).unwrap(), -1);
        assert!(matches!(
            winding_number(&circle, c(1.0, 0.0)),
            Err(GeometryError::PointOnCurve { .. })
        ));
    }

    #[test]
    fn curve_rejects_self_intersection_and_short_input() {
        let bowtie: Vec<Point> = (0..16)
            .map(|k| {
                let t = TAU * k as f64 / 16.0;
                c(t.sin(), (2.0 * t).sin())
            })
            .collect();
        assert!(DiscretizedCurve::new(bowtie).is_err());
        assert!(DiscretizedCurve::circle(c(0.0, 0.0), 1.0, 8).is_err());
        assert!(unit_circle().signed_area() > 0.0);
    }

    fn disk_point() -> CompactSet {
        CompactSet::new(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::point(c(2.0, 0.0)).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn offset_family_of_disk_and_point() {
        let fam = offset_curve_family(&disk_point(), 0.1).unwrap();
        assert!(fam.curves()[0].nodes().iter().all(|z| (z.norm() - 1.1).abs() < 1e-14));
        assert!(fam.curves()[1]
            .nodes()
            .iter()
            .all(|z| ((z - c(2.0, 0.0)).norm() - 0.1).abs() < 1e-14));
        assert!(validate_curve_family(&disk_point(), &fam).passed);
    }

    #[test]
    fn offset_family_margin_too_large() {
        let set = CompactSet::new(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::disk(c(4.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            offset_curve_family(&set, 1.6),
            Err(GeometryError::MarginTooLarge { .. })
        ));
    }

    #[test]
    fn offset_family_of_square_and_disk() {
        let set = CompactSet::new(vec![
            Component::rectangle(0.0, 0.0, 1.0, 1.0).unwrap(),
            Component::disk(c(5.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let fam = offset_curve_family(&set, 0.2).unwrap();
        let report = validate_curve_family(&set, &fam);
        assert!(report.passed, "{:?}", report.violations);
        // Every node of the rounded square sits at distance 0.2 from the square.
        let square = set.component(0);
        for z in fam.curves()[0].nodes() {
            assert!((square.distance(*z) - 0.2).abs() < 1e-12);
        }
        assert!((fam.curves()[0].length() - (4.0 + TAU * 0.2)).abs() < 1e-3);
    }

    #[test]
    fn stadium_around_segment() {
        let seg = Component::segment(c(-2.0, 0.0), c(2.0, 0.0)).unwrap();
        let curve = offset_curve(&seg, 0.5).unwrap();
        for z in curve.nodes() {
            assert!((seg.distance(*z) - 0.5).abs() < 1e-12);
        }
        assert_eq!(winding_number(&curve, c(0.0, 0.0)).unwrap(), 1);
        assert_eq!(winding_number(&curve, c(2.0, 0.0)).unwrap(), 1);
    }

    #[test]
    fn validation_flags_concentric_circles() {
        let set = disk_point();
        let fam = CurveFamily::new(vec![
            DiscretizedCurve::circle(c(0.0, 0.0), 1.2, 256).unwrap(),
            DiscretizedCurve::circle(c(0.0, 0.0), 1.5, 256).unwrap(),
        ]);
        let report = validate_curve_family(&set, &fam);
        assert!(!report.passed);
        assert_ne!(report.checks[1].own_windings, vec![1]);
    }

    #[test]
    fn validation_flags_crossing_curve() {
        let set = disk_point();
        let fam = CurveFamily::new(vec![
            DiscretizedCurve::circle(c(0.5, 0.0), 1.0, 256).unwrap(),
            DiscretizedCurve::circle(c(2.0, 0.0), 0.1, 256).unwrap(),
        ]);
        let report = validate_curve_family(&set, &fam);
        assert!(!report.passed);
        assert_eq!(report.checks[0].min_distance_to_set, 0.0);
    }

    #[test]
    fn validation_flags_count_mismatch() {
        let fam = CurveFamily::new(vec![unit_circle()]);
        assert!(!validate_curve_family(&disk_point(), &fam).passed);
    }
}
