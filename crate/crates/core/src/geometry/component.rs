//! Connected pieces of a compact set and their exact distance formulas.
//!
//! Every component is the Minkowski sum of a convex *core* (a point, a
//! segment or a convex polygon) with a closed disk of some radius. Disks are
//! point cores inflated by their radius; the other kinds have radius zero.
//! All set-to-set distances reduce to core-to-core distances minus radii.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::Point;

/// One connected compact piece of a plane set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    Disk { center: Point, radius: f64 },
    #[serde(rename = "polygon")]
    ConvexPolygon { vertices: Vec<Point> },
    Segment { a: Point, b: Point },
    #[serde(rename = "point")]
    SinglePoint { p: Point },
}

fn finite(z: Point) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn cross(u: Point, v: Point) -> f64 {
    u.re * v.im - u.im * v.re
}

impl Component {
    pub fn disk(center: Point, radius: f64) -> Result<Self, GeometryError> {
        let c = Component::Disk { center, radius };
        c.validate()?;
        Ok(c)
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let c = Component::ConvexPolygon { vertices };
        c.validate()?;
        Ok(c)
    }

    pub fn segment(a: Point, b: Point) -> Result<Self, GeometryError> {
        let c = Component::Segment { a, b };
        c.validate()?;
        Ok(c)
    }

    pub fn point(p: Point) -> Result<Self, GeometryError> {
        let c = Component::SinglePoint { p };
        c.validate()?;
        Ok(c)
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]` as a counterclockwise polygon.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeometryError> {
        Self::polygon(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let invalid = |msg: &str| Err(GeometryError::InvalidComponent(msg.to_string()));
        match self {
            Component::Disk { center, radius } => {
                if !finite(*center) || !radius.is_finite() {
                    return invalid("disk has non-finite data");
                }
                if *radius <= 0.0 {
                    return invalid("disk radius must be positive");
                }
            }
            Component::ConvexPolygon { vertices } => {
                let n = vertices.len();
                if n < 3 {
                    return invalid("polygon needs at least 3 vertices");
                }
                if vertices.iter().any(|v| !finite(*v)) {
                    return invalid("polygon has non-finite vertices");
                }
                let mut turning = 0.0;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    let c = vertices[(i + 2) % n];
                    if (b - a).norm() == 0.0 {
                        return invalid("polygon has repeated vertices");
                    }
                    let turn = cross(b - a, c - b);
                    if turn <= 0.0 {
                        return invalid("polygon must be strictly convex and counterclockwise");
                    }
                    turning += ((c - b) / (b - a)).arg();
                }
                // Star polygons turn by a multiple of 2π larger than one.
                if (turning - TAU).abs() > 1e-6 {
                    return invalid("polygon boundary is not simple");
                }
            }
            Component::Segment { a, b } => {
                if !finite(*a) || !finite(*b) {
                    return invalid("segment has non-finite endpoints");
                }
                if a == b {
                    return invalid("segment endpoints must differ");
                }
            }
            Component::SinglePoint { p } => {
                if !finite(*p) {
                    return invalid("point is not finite");
                }
            }
        }
        Ok(())
    }

    pub fn has_interior(&self) -> bool {
        matches!(self, Component::Disk { .. } | Component::ConvexPolygon { .. })
    }

    /// Convex core vertices (counterclockwise) and inflation radius.
    pub fn core(&self) -> (Vec<Point>, f64) {
        match self {
            Component::Disk { center, radius } => (vec![*center], *radius),
            Component::ConvexPolygon { vertices } => (vertices.clone(), 0.0),
            Component::Segment { a, b } => (vec![*a, *b], 0.0),
            Component::SinglePoint { p } => (vec![*p], 0.0),
        }
    }

    /// Euclidean distance from `z` to the point set; zero iff `z` belongs to it.
    pub fn distance(&self, z: Point) -> f64 {
        match self {
            Component::Disk { center, radius } => ((z - center).norm() - radius).max(0.0),
            Component::ConvexPolygon { vertices } => {
                if polygon_contains(vertices, z) {
                    0.0
                } else {
                    polygon_edges(vertices)
                        .map(|(a, b)| point_segment_distance(z, a, b))
                        .fold(f64::INFINITY, f64::min)
                }
            }
            Component::Segment { a, b } => point_segment_distance(z, *a, *b),
            Component::SinglePoint { p } => (z - p).norm(),
        }
    }

    /// Distance from `z` to the complement of the component; zero off the interior.
    pub fn distance_to_complement(&self, z: Point) -> f64 {
        match self {
            Component::Disk { center, radius } => (radius - (z - center).norm()).max(0.0),
            Component::ConvexPolygon { vertices } => {
                let n = vertices.len();
                let mut depth = f64::INFINITY;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    // Signed distance to the supporting line, positive inside.
                    let d = cross(b - a, z - a) / (b - a).norm();
                    depth = depth.min(d);
                }
                depth.max(0.0)
            }
            Component::Segment { .. } | Component::SinglePoint { .. } => 0.0,
        }
    }

    pub fn contains(&self, z: Point) -> bool {
        self.distance(z) == 0.0
    }

    /// Set distance between two components.
    pub fn gap(&self, other: &Component) -> f64 {
        let (ca, ra) = self.core();
        let (cb, rb) = other.core();
        (hull_distance(&ca, &cb) - ra - rb).max(0.0)
    }

    /// Distance from the segment `[p, q]` to the component.
    pub fn segment_distance(&self, p: Point, q: Point) -> f64 {
        let (core, r) = self.core();
        (hull_distance(&[p, q], &core) - r).max(0.0)
    }

    pub fn boundary_length(&self) -> f64 {
        match self {
            Component::Disk { radius, .. } => TAU * radius,
            Component::ConvexPolygon { vertices } => {
                polygon_edges(vertices).map(|(a, b)| (b - a).norm()).sum()
            }
            Component::Segment { a, b } => 2.0 * (b - a).norm(),
            Component::SinglePoint { .. } => 0.0,
        }
    }

    /// A reference point: disk center, polygon vertex centroid, segment midpoint or the point.
    pub fn reference_point(&self) -> Point {
        match self {
            Component::Disk { center, .. } => *center,
            Component::ConvexPolygon { vertices } => {
                vertices.iter().sum::<Point>() / vertices.len() as f64
            }
            Component::Segment { a, b } => (a + b) * 0.5,
            Component::SinglePoint { p } => *p,
        }
    }

    /// `(min, max)` corners of the axis-aligned bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        let (core, r) = self.core();
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in core {
            lo.re = lo.re.min(v.re - r);
            lo.im = lo.im.min(v.im - r);
            hi.re = hi.re.max(v.re + r);
            hi.im = hi.im.max(v.im + r);
        }
        (lo, hi)
    }

    /// Closed-loop parameterization of the boundary, `t ∈ [0, 1)`.
    ///
    /// Disks are traversed by angle, polygons by arc length, segments go
    /// `a → b` on `[0, 1/2]` and back on `[1/2, 1)`.
    pub fn boundary_point(&self, t: f64) -> Point {
        let t = t.rem_euclid(1.0);
        match self {
            Component::Disk { center, radius } => center + Point::from_polar(*radius, TAU * t),
            Component::ConvexPolygon { vertices } => {
                let total = self.boundary_length();
                let mut s = t * total;
                for (a, b) in polygon_edges(vertices) {
                    let len = (b - a).norm();
                    if s <= len {
                        return a + (b - a) * (s / len);
                    }
                    s -= len;
                }
                vertices[0]
            }
            Component::Segment { a, b } => {
                if t <= 0.5 {
                    a + (b - a) * (2.0 * t)
                } else {
                    b + (a - b) * (2.0 * t - 1.0)
                }
            }
            Component::SinglePoint { p } => *p,
        }
    }

    /// Quasi-uniform boundary nodes at `density` points per unit length.
    ///
    /// Closed boundaries get at least 16 nodes. Segments get Chebyshev–Lobatto
    /// abscissae (clustered at the endpoints); points yield themselves.
    pub fn sample_boundary(&self, density: f64) -> Vec<Point> {
        match self {
            Component::Disk { center, radius } => {
                let n = ((TAU * radius * density).ceil() as usize).max(16);
                (0..n)
                    .map(|k| center + Point::from_polar(*radius, TAU * k as f64 / n as f64))
                    .collect()
            }
            Component::ConvexPolygon { vertices } => {
                let per = (self.boundary_length() * density).ceil().max(16.0);
                let mut out = Vec::new();
                for (a, b) in polygon_edges(vertices) {
                    let len = (b - a).norm();
                    let k = ((len * density).ceil() as usize)
                        .max((per * len / self.boundary_length()).ceil() as usize)
                        .max(1);
                    for i in 0..k {
                        out.push(a + (b - a) * (i as f64 / k as f64));
                    }
                }
                out
            }
            Component::Segment { a, b } => {
                let n = (((b - a).norm() * density).ceil() as usize).max(2);
                chebyshev_lobatto(*a, *b, n)
            }
            Component::SinglePoint { p } => vec![*p],
        }
    }

    /// Image under the similarity `z ↦ scale·z + shift` (`scale ≠ 0`).
    pub fn transformed(&self, scale: Point, shift: Point) -> Component {
        let map = |z: &Point| scale * z + shift;
        match self {
            Component::Disk { center, radius } => Component::Disk {
                center: map(center),
                radius: radius * scale.norm(),
            },
            Component::ConvexPolygon { vertices } => Component::ConvexPolygon {
                vertices: vertices.iter().map(map).collect(),
            },
            Component::Segment { a, b } => Component::Segment {
                a: map(a),
                b: map(b),
            },
            Component::SinglePoint { p } => Component::SinglePoint { p: map(p) },
        }
    }
}

/// Chebyshev–Lobatto nodes on `[a, b]`, `n ≥ 2`, ordered from `a` to `b`.
pub fn chebyshev_lobatto(a: Point, b: Point, n: usize) -> Vec<Point> {
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    (0..n)
        .map(|k| {
            let x = -(PI * k as f64 / (n - 1) as f64).cos();
            mid + half * x
        })
        .collect()
}

pub(crate) fn polygon_edges(vertices: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    let n = vertices.len();
    (0..n).map(move |i| (vertices[i], vertices[(i + 1) % n]))
}

fn polygon_contains(vertices: &[Point], z: Point) -> bool {
    polygon_edges(vertices).all(|(a, b)| cross(b - a, z - a) >= 0.0)
}

pub fn point_segment_distance(z: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    // Collinear or touching configurations.
    (d1 == 0.0 && point_segment_distance(p1, q1, q2) == 0.0)
        || (d2 == 0.0 && point_segment_distance(p2, q1, q2) == 0.0)
        || (d3 == 0.0 && point_segment_distance(q1, p1, p2) == 0.0)
        || (d4 == 0.0 && point_segment_distance(q2, p1, p2) == 0.0)
}

pub(crate) fn segment_segment_distance(p1: Point, p2: Point, q1: Point, q2: Point) -> f64 {
    if segments_intersect(p1, p2, q1, q2) {
        return 0.0;
    }
    point_segment_distance(p1, q1, q2)
        .min(point_segment_distance(p2, q1, q2))
        .min(point_segment_distance(q1, p1, p2))
        .min(point_segment_distance(q2, p1, p2))
}

fn hull_edges(h: &[Point]) -> Vec<(Point, Point)> {
    match h.len() {
        1 => vec![(h[0], h[0])],
        2 => vec![(h[0], h[1])],
        _ => polygon_edges(h).collect(),
    }
}

/// Distance between two convex hulls given as counterclockwise vertex lists
/// of length 1 (point), 2 (segment) or at least 3 (polygon).
pub(crate) fn hull_distance(a: &[Point], b: &[Point]) -> f64 {
    if a.len() >= 3 && b.iter().any(|&v| polygon_contains(a, v)) {
        return 0.0;
    }
    if b.len() >= 3 && a.iter().any(|&v| polygon_contains(b, v)) {
        return 0.0;
    }
    let ea = hull_edges(a);
    let eb = hull_edges(b);
    let mut best = f64::INFINITY;
    for &(p1, p2) in &ea {
        for &(q1, q2) in &eb {
            best = best.min(segment_segment_distance(p1, p2, q1, q2));
            if best == 0.0 {
                return 0.0;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    #[test]
    fn distances_to_components() {
        let disk = Component::disk(c(0.0, 0.0), 1.0).unwrap();
        assert!((disk.distance(c(3.0, 0.0)) - 2.0).abs() < 1e-15);
        let seg = Component::segment(c(-2.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((seg.distance(c(0.0, 1.0)) - 1.0).abs() < 1e-15);
        let pt = Component::point(c(2.0, 0.0)).unwrap();
        assert_eq!(pt.distance(c(2.0, 0.0)), 0.0);
    }

    #[test]
    fn distances_to_complement() {
        let disk = Component::disk(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(disk.distance_to_complement(c(0.0, 0.0)), 1.0);
        assert_eq!(disk.distance_to_complement(c(1.0, 0.0)), 0.0);
        let square = Component::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!((square.distance_to_complement(c(0.5, 0.5)) - 0.5).abs() < 1e-15);
        assert_eq!(square.distance_to_complement(c(2.0, 0.5)), 0.0);
        let seg = Component::segment(c(-2.0, 0.0), c(2.0, 0.0)).unwrap();
        assert_eq!(seg.distance_to_complement(c(0.0, 0.0)), 0.0);
    }

    #[test]
    fn polygon_distance_outside_and_inside() {
        let square = Component::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(square.distance(c(0.3, 0.7)), 0.0);
        assert!((square.distance(c(2.0, 2.0)) - 2f64.sqrt()).abs() < 1e-15);
        assert!((square.distance(c(0.5, -3.0)) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_components() {
        assert!(Component::disk(c(0.0, 0.0), 0.0).is_err());
        assert!(Component::segment(c(1.0, 1.0), c(1.0, 1.0)).is_err());
        // Clockwise square.
        assert!(Component::polygon(vec![c(0.0, 0.0), c(0.0, 1.0), c(1.0, 1.0), c(1.0, 0.0)]).is_err());
        // Collinear vertex.
        assert!(Component::polygon(vec![c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(0.0, 1.0)]).is_err());
        // Pentagram: every turn is a left turn but the boundary winds twice.
        let star: Vec<Point> = (0..5).map(|k| Point::from_polar(1.0, 2.0 * TAU * k as f64 / 5.0)).collect();
        assert!(Component::polygon(star).is_err());
        assert!(Component::point(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn gaps_between_components() {
        let d0 = Component::disk(c(0.0, 0.0), 1.0).unwrap();
        let d1 = Component::disk(c(4.0, 0.0), 1.0).unwrap();
        assert!((d0.gap(&d1) - 2.0).abs() < 1e-15);
        let square = Component::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!((square.gap(&d1) - 2.0).abs() < 1e-15);
        let seg = Component::segment(c(0.5, -1.0), c(0.5, 2.0)).unwrap();
        assert_eq!(square.gap(&seg), 0.0);
        let inner = Component::point(c(0.5, 0.5)).unwrap();
        assert_eq!(square.gap(&inner), 0.0);
    }

    #[test]
    fn boundary_samples() {
        let disk = Component::disk(c(0.0, 0.0), 1.0).unwrap();
        let s = disk.sample_boundary(16.0);
        assert!(s.len() >= 100);
        assert!(s.iter().all(|z| (z.norm() - 1.0).abs() < 1e-14));
        assert_eq!(Component::point(c(2.0, 0.0)).unwrap().sample_boundary(50.0), vec![c(2.0, 0.0)]);
        let seg = Component::segment(c(-2.0, 0.0), c(2.0, 0.0)).unwrap();
        let nodes = seg.sample_boundary(8.0);
        assert!(nodes.len() >= 32);
        assert_eq!(nodes[0], c(-2.0, 0.0));
        assert!((nodes[nodes.len() - 1] - c(2.0, 0.0)).norm() < 1e-15);
        // Endpoint clustering: first gap smaller than the central gap.
        let mid = nodes.len() / 2;
        assert!((nodes[1] - nodes[0]).norm() < (nodes[mid] - nodes[mid - 1]).norm());
    }

    #[test]
    fn boundary_parameterization_is_closed() {
        let square = Component::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!((square.boundary_point(0.0) - c(0.0, 0.0)).norm() < 1e-15);
        assert!((square.boundary_point(0.25) - c(1.0, 0.0)).norm() < 1e-15);
        let seg = Component::segment(c(-2.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((seg.boundary_point(0.5) - c(2.0, 0.0)).norm() < 1e-15);
        assert!((seg.boundary_point(0.75) - c(0.0, 0.0)).norm() < 1e-15);
    }
}
