use serde::{Deserialize, Serialize};

use super::critical::rho_critical;
use super::{GreenFunction, GreensModel, PotentialError};
use crate::geometry::{
    curve_node_count, offset_curve, validate_curve_family, CurveFamily, DiscretizedCurve,
    GeometryError,
};
use crate::optimize::{bisect, golden_max};
use crate::Point;

/// Largest turn of the tangent allowed in one tracing step, in radians.
const MAX_TURN: f64 = 0.05;
const MAX_STEPS: usize = 200_000;

fn family_error(set: &crate::geometry::CompactSet, family: &CurveFamily) -> Option<String> {
    let report = validate_curve_family(set, family);
    (!report.passed).then(|| report.violations.join("; "))
}

/// `max e^{−g}` over a validated curve family.
///
/// The maximum over nodes is refined by a golden-section search along the two
/// segments next to the hottest node.
pub fn theta_for_family<G: GreenFunction + ?Sized>(
    green: &G,
    family: &CurveFamily,
) -> Result<f64, PotentialError> {
    if let Some(msg) = family_error(green.set(), family) {
        return Err(PotentialError::InvalidFamily(msg));
    }
    let heat = |z: Point| (-green.potential(z).max(0.0)).exp();
    let mut best = (0.0, 0, 0);
    for (i, curve) in family.curves().iter().enumerate() {
        for (k, &z) in curve.nodes().iter().enumerate() {
            let v = heat(z);
            if v > best.0 {
                best = (v, i, k);
            }
        }
    }
    let (mut theta, i, k) = best;
    let nodes = family.curves()[i].nodes();
    let n = nodes.len();
    for (a, b) in [(nodes[(k + n - 1) % n], nodes[k]), (nodes[k], nodes[(k + 1) % n])] {
        let (_, v) = golden_max(|t| heat(a + (b - a) * t), 0.0, 1.0, 1e-9);
        theta = theta.max(v);
    }
    Ok(theta)
}

/// Newton projection onto `{g = level}` along the gradient.
fn project<G: GreenFunction + ?Sized>(green: &G, mut z: Point, level: f64) -> Option<Point> {
    let tol = 1e-12 * level.max(1e-3);
    for _ in 0..30 {
        let r = green.potential(z) - level;
        let grad = green.gradient(z);
        let n2 = grad.norm_sqr();
        if !(n2 > 0.0) || !r.is_finite() {
            return None;
        }
        if r.abs() <= tol {
            return Some(z);
        }
        z -= grad * (r / n2);
    }
    ((green.potential(z) - level).abs() <= 1e3 * tol).then_some(z)
}

fn unit_tangent<G: GreenFunction + ?Sized>(green: &G, z: Point) -> Option<Point> {
    let grad = green.gradient(z);
    let n = grad.norm();
    (n > 0.0 && n.is_finite()).then(|| Point::new(0.0, 1.0) * grad / n)
}

/// Point where the ray from the reference point of component `j` meets the level.
fn starting_point<G: GreenFunction + ?Sized>(
    green: &G,
    j: usize,
    level: f64,
) -> Result<(Point, Point), PotentialError> {
    let set = green.set();
    let comp = set.component(j);
    let refp = comp.reference_point();
    let away = set
        .components()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, c)| c.reference_point())
        .min_by(|a, b| (a - refp).norm().total_cmp(&(b - refp).norm()))
        .map(|o| refp - o)
        .filter(|d| d.norm() > 0.0)
        .unwrap_or(Point::new(1.0, 0.0));
    let dir = away / away.norm();
    let (lo, hi) = comp.bounding_box();
    let size = (hi - lo).norm();
    let exit = bisect(
        |t| if comp.contains(refp + dir * t) { -1.0 } else { 1.0 },
        0.0,
        size,
        1e-15 * size,
    );
    let t0 = exit + 1e-12 * size;
    let mut s = 1e-3 * size;
    for _ in 0..80 {
        let z = refp + dir * (t0 + s);
        if green.potential(z) >= level {
            let t = bisect(
                |t| green.potential(refp + dir * t) - level,
                t0,
                t0 + s,
                1e-15 * (t0 + s),
            );
            let z = project(green, refp + dir * t, level)
                .ok_or_else(|| PotentialError::Trace("projection failed at start".into()))?;
            return Ok((z, refp));
        }
        s *= 2.0;
    }
    Err(PotentialError::Trace(format!(
        "level {level} not reached along the ray from component {j}"
    )))
}

/// Traces the closed level curve through the start point counterclockwise.
fn trace<G: GreenFunction + ?Sized>(green: &G, j: usize, level: f64) -> Result<Vec<Point>, PotentialError> {
    let (z0, refp) = starting_point(green, j, level)?;
    let t0 = unit_tangent(green, z0).ok_or_else(|| PotentialError::Trace("zero gradient".into()))?;
    let scale = (z0 - refp).norm();
    let h_max = 0.1 * scale;
    let h_min = 1e-12 * scale;
    let max_length = 1e4 * green.set().extent().max(scale);
    let along = |z: Point| ((z - z0) * t0.conj()).re;

    let mut pts = vec![z0];
    let mut z = z0;
    let mut h = h_max;
    let mut travelled = 0.0;
    let mut first_step = 0.0;
    for _ in 0..MAX_STEPS {
        let t = unit_tangent(green, z).ok_or_else(|| PotentialError::Trace("zero gradient".into()))?;
        let next = loop {
            if h < h_min {
                return Err(PotentialError::Trace(format!(
                    "step underflow near {z} at level {level}"
                )));
            }
            let zp = z + t * h;
            if let Some(zc) = project(green, zp, level) {
                if let Some(tc) = unit_tangent(green, zc) {
                    if (tc / t).arg().abs() < MAX_TURN && (zc - zp).norm() < 0.1 * h {
                        break zc;
                    }
                }
            }
            h *= 0.5;
        };
        let step = (next - z).norm();
        if first_step == 0.0 {
            first_step = step;
        }
        travelled += step;
        if travelled > 4.0 * first_step
            && along(z) < 0.0
            && along(next) >= 0.0
            && (next - z0).norm() < 3.0 * step
        {
            return Ok(pts);
        }
        if travelled > max_length {
            break;
        }
        pts.push(next);
        z = next;
        h = (1.5 * h).min(h_max);
    }
    Err(PotentialError::Trace(format!(
        "level curve around component {j} did not close"
    )))
}

/// Subdivides long segments of a traced closed polyline so that no segment
/// exceeds the default spacing; inserted nodes are projected to the level.
fn densify<G: GreenFunction + ?Sized>(green: &G, pts: &[Point], level: f64) -> Vec<Point> {
    let n = pts.len();
    let total: f64 = (0..n).map(|i| (pts[(i + 1) % n] - pts[i]).norm()).sum();
    let spacing = total / curve_node_count(total) as f64;
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        out.push(a);
        let k = ((b - a).norm() / spacing).ceil() as usize;
        for s in 1..k {
            let z = a + (b - a) * (s as f64 / k as f64);
            out.push(project(green, z, level).unwrap_or(z));
        }
    }
    out
}

/// One closed curve per component: the traced level curve `{g = level}` around
/// each modeled component and a small circle or stadium with `g ≥ level`
/// around every other one.
pub fn level_curve_family<G: GreenFunction + ?Sized>(
    green: &G,
    level: f64,
) -> Result<CurveFamily, PotentialError> {
    if !(level > 0.0 && level.is_finite()) {
        return Err(GeometryError::InvalidArgument(format!("level must be positive, got {level}")).into());
    }
    let set = green.set();
    let mut curves = Vec::with_capacity(set.len());
    for j in 0..set.len() {
        let comp = set.component(j);
        if green.is_modeled(j) {
            let pts = trace(green, j, level)?;
            let nodes = densify(green, &pts, level);
            let curve = DiscretizedCurve::new(nodes).map_err(|_| PotentialError::MergedLevelSet { level })?;
            curves.push(curve);
        } else {
            let gap = (0..set.len())
                .filter(|&i| i != j)
                .map(|i| comp.gap(set.component(i)))
                .fold(f64::INFINITY, f64::min);
            let mut r = if gap.is_finite() { 0.25 * gap } else { 0.25 * set.extent().max(1.0) };
            let mut found = None;
            for _ in 0..60 {
                let curve = offset_curve(comp, r)?;
                let low = curve
                    .nodes()
                    .iter()
                    .map(|&z| green.potential(z))
                    .fold(f64::INFINITY, f64::min);
                if low >= level {
                    found = Some(curve);
                    break;
                }
                r *= 0.5;
            }
            curves.push(found.ok_or(PotentialError::MergedLevelSet { level })?);
        }
    }
    let family = CurveFamily::new(curves);
    if let Some(msg) = family_error(set, &family) {
        log::debug!("level {level}: {msg}");
        return Err(PotentialError::MergedLevelSet { level });
    }
    Ok(family)
}

/// θ evaluated on one level-curve family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaStep {
    pub level: f64,
    pub theta: f64,
}

/// θ on level-curve families at levels rising toward the critical potential.
///
/// The first level is `g_c·10⁻³`; step `k ≥ 1` uses `g_c·(1 − 2^{−k})`.
pub fn theta_descent(model: &GreensModel, steps: usize) -> Result<Vec<ThetaStep>, PotentialError> {
    let gc = rho_critical(model)?.g_c;
    let mut out = Vec::with_capacity(steps);
    for k in 0..steps {
        let level = if k == 0 {
            gc * 1e-3
        } else {
            gc * (1.0 - 0.5f64.powi(k as i32))
        };
        let family = level_curve_family(model, level)?;
        let theta = theta_for_family(model, &family)?;
        out.push(ThetaStep { level, theta });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{offset_curve_family, CompactSet, Component};
    use crate::potential::{fit_greens, GreensParams};

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    fn disk_point() -> GreensModel {
        let l = CompactSet::new(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::point(c(2.0, 0.0)).unwrap(),
        ])
        .unwrap();
        fit_greens(&l, &GreensParams::default()).unwrap()
    }

    fn two_disks() -> GreensModel {
        let l = CompactSet::new(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::disk(c(4.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        fit_greens(&l, &GreensParams::default()).unwrap()
    }

    fn circles(a: (Point, f64), b: (Point, f64)) -> CurveFamily {
        CurveFamily::new(vec![
            DiscretizedCurve::circle(a.0, a.1, 256).unwrap(),
            DiscretizedCurve::circle(b.0, b.1, 256).unwrap(),
        ])
    }

    #[test]
    fn theta_on_circle_families() {
        let m = disk_point();
        let far = circles((c(0.0, 0.0), 1.9), (c(2.0, 0.0), 0.05));
        let theta = theta_for_family(&m, &far).unwrap();
        // Chord midpoints sit slightly inside the circle.
        assert!(theta >= 1.0 / 1.9 && theta - 1.0 / 1.9 < 1e-4, "{theta}");
        let near = circles((c(0.0, 0.0), 1.1), (c(2.0, 0.0), 0.1));
        assert!((theta_for_family(&m, &near).unwrap() - 1.0 / 1.1).abs() < 1e-4);
        let bad = circles((c(0.0, 0.0), 1.2), (c(0.0, 0.0), 1.5));
        assert!(matches!(theta_for_family(&m, &bad), Err(PotentialError::InvalidFamily(_))));
    }

    #[test]
    fn single_disk_level_curve_is_circle() {
        let l = CompactSet::new(vec![Component::disk(c(0.0, 0.0), 1.0).unwrap()]).unwrap();
        let m = fit_greens(&l, &GreensParams::default()).unwrap();
        let fam = level_curve_family(&m, 1.5f64.ln()).unwrap();
        assert_eq!(fam.len(), 1);
        for z in fam.curves()[0].nodes() {
            assert!((z.norm() - 1.5).abs() < 1e-12);
        }
        assert!(fam.curves()[0].signed_area() > 0.0);
    }

    #[test]
    fn two_disk_levels_split_and_merge() {
        let m = two_disks();
        let gc = rho_critical(&m).unwrap().g_c;
        let fam = level_curve_family(&m, 0.5 * gc).unwrap();
        assert_eq!(fam.len(), 2);
        assert!(matches!(
            level_curve_family(&m, 2.0 * gc),
            Err(PotentialError::MergedLevelSet { .. })
        ));
    }

    #[test]
    fn theta_on_offsets_exceeds_rho() {
        let m = two_disks();
        let rho = rho_critical(&m).unwrap().rho;
        for margin in [0.05, 0.3, 0.9] {
            let fam = offset_curve_family(&m.source_set, margin).unwrap();
            assert!(theta_for_family(&m, &fam).unwrap() >= rho - 1e-3);
        }
    }

    #[test]
    fn descent_on_disk_point() {
        let steps = theta_descent(&disk_point(), 8).unwrap();
        assert!(steps[0].theta > 0.99);
        for w in steps.windows(2) {
            assert!(w[1].theta <= w[0].theta);
        }
        let last = steps.last().unwrap().theta;
        assert!(last >= 0.5 - 1e-3 && last < 0.51, "{last}");
    }

    #[test]
    fn descent_on_two_disks() {
        let m = two_disks();
        let rho = rho_critical(&m).unwrap().rho;
        let steps = theta_descent(&m, 8).unwrap();
        for w in steps.windows(2) {
            assert!(w[1].theta <= w[0].theta);
        }
        let last = steps.last().unwrap().theta;
        assert!(last >= rho - 1e-3 && (last - rho) / rho < 0.01, "{last} vs {rho}");
    }
}
