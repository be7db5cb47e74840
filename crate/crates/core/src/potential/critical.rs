use serde::{Deserialize, Serialize};

use super::level::level_curve_family;
use super::{GreensModel, PotentialError};
use crate::geometry::Component;
use crate::Point;

/// Relative offset of the levels probed around a critical value.
const LEVEL_EPS: f64 = 1e-4;
/// Seeds per segment joining two modeled components.
const SEGMENT_SEEDS: usize = 15;
/// Seed grid resolution per axis.
const GRID_SEEDS: usize = 24;

/// Hessian type of a critical point of a harmonic function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Signature {
    /// Eigenvalues of opposite sign.
    Indefinite,
    /// Vanishing Hessian (higher-order saddle).
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddlePoint {
    pub location: Point,
    pub g_value: f64,
    pub hessian_signature: Signature,
    pub gradient_norm: f64,
}

/// What fixes the critical potential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CriticalSource {
    Saddle(SaddlePoint),
    /// A component without charges (point or segment); `g_value` is the least
    /// value of `g` on it.
    Polar {
        component: usize,
        location: Point,
        g_value: f64,
    },
}

impl CriticalSource {
    pub fn g_value(&self) -> f64 {
        match self {
            CriticalSource::Saddle(s) => s.g_value,
            CriticalSource::Polar { g_value, .. } => *g_value,
        }
    }

    pub fn location(&self) -> Point {
        match self {
            CriticalSource::Saddle(s) => s.location,
            CriticalSource::Polar { location, .. } => *location,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoCritical {
    pub rho: f64,
    pub g_c: f64,
    pub source: CriticalSource,
}

fn newton(model: &GreensModel, mut z: Point, max_step: f64) -> Point {
    for _ in 0..80 {
        let (f, f1, _) = model.field_derivatives(z);
        if f.norm() < 1e-14 || f1.norm() == 0.0 {
            break;
        }
        let mut dz = f / f1;
        if dz.norm() > max_step {
            dz *= max_step / dz.norm();
        }
        z -= dz;
        if !(z.re.is_finite() && z.im.is_finite()) {
            break;
        }
    }
    // Newton on f/f' converges quadratically to multiple zeros as well.
    for _ in 0..10 {
        let (f, f1, f2) = model.field_derivatives(z);
        let den = f1 * f1 - f * f2;
        if f.norm() == 0.0 || den.norm() == 0.0 {
            break;
        }
        let dz = f * f1 / den;
        if dz.norm() > max_step {
            break;
        }
        z -= dz;
    }
    z
}

/// Zeros of the gradient of `g` outside the set with `g > 0`.
pub fn find_saddles(model: &GreensModel) -> Vec<SaddlePoint> {
    let set = &model.source_set;
    let modeled = model.modeled_components();
    if modeled.len() < 2 {
        return Vec::new();
    }
    let scale = set.extent();
    let mut seeds = Vec::new();
    for (a, &i) in modeled.iter().enumerate() {
        for &j in &modeled[a + 1..] {
            let p = set.component(i).reference_point();
            let q = set.component(j).reference_point();
            for k in 1..=SEGMENT_SEEDS {
                seeds.push(p + (q - p) * (k as f64 / (SEGMENT_SEEDS + 1) as f64));
            }
        }
    }
    let (lo, hi) = set.bounding_box();
    let pad = (hi - lo) * 0.25;
    let (lo, hi) = (lo - pad, hi + pad);
    for a in 0..=GRID_SEEDS {
        for b in 0..=GRID_SEEDS {
            seeds.push(Point::new(
                lo.re + (hi.re - lo.re) * a as f64 / GRID_SEEDS as f64,
                lo.im + (hi.im - lo.im) * b as f64 / GRID_SEEDS as f64,
            ));
        }
    }

    let mut found: Vec<SaddlePoint> = Vec::new();
    for z0 in seeds {
        if set.distance(z0) == 0.0 {
            continue;
        }
        let z = newton(model, z0, 0.25 * scale);
        if !(z.re.is_finite() && z.im.is_finite()) {
            continue;
        }
        let (f, f1, _) = model.field_derivatives(z);
        if f.norm() >= 1e-10 || set.distance(z) <= 1e-6 * scale {
            continue;
        }
        let g = model.raw(z);
        if g <= 0.0 {
            continue;
        }
        let s = SaddlePoint {
            location: z,
            g_value: g,
            hessian_signature: if f1.norm() > 1e-6 {
                Signature::Indefinite
            } else {
                Signature::Degenerate
            },
            gradient_norm: f.norm(),
        };
        match found.iter_mut().find(|t| (t.location - z).norm() < 1e-8) {
            Some(t) if t.gradient_norm > s.gradient_norm => *t = s,
            Some(_) => {}
            None => found.push(s),
        }
    }

    // A higher-order saddle splits into nearby simple zeros under fitting noise;
    // report each cluster once.
    let mut merged: Vec<SaddlePoint> = Vec::new();
    for s in found {
        match merged
            .iter_mut()
            .find(|t| (t.location - s.location).norm() < 1e-5 * scale && (t.g_value - s.g_value).abs() < 1e-9)
        {
            Some(t) => {
                t.location = (t.location + s.location) * 0.5;
                t.g_value = model.raw(t.location);
                t.gradient_norm = model.field(t.location).norm();
                t.hessian_signature = Signature::Degenerate;
            }
            None => merged.push(s),
        }
    }
    merged.sort_by(|a, b| a.g_value.total_cmp(&b.g_value));
    merged
}

fn polar_sources(model: &GreensModel) -> Vec<CriticalSource> {
    let set = &model.source_set;
    let mut out = Vec::new();
    for (j, comp) in set.components().iter().enumerate() {
        if model.modeled_components().contains(&j) {
            continue;
        }
        let samples = match comp {
            Component::SinglePoint { p } => vec![*p],
            _ => comp.sample_boundary(64.0),
        };
        let (location, g_value) = samples
            .into_iter()
            .map(|z| (z, model.raw(z)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("component samples are never empty");
        out.push(CriticalSource::Polar {
            component: j,
            location,
            g_value,
        });
    }
    out
}

/// Critical potential `g_c` and `ρ = e^{−g_c}`.
///
/// Candidates are the saddle values and the least values of `g` on components
/// without charges. The smallest candidate `t` is taken such that the level
/// curves at `t(1 − ε)` still separate every component while those at
/// `t(1 + ε)` no longer do.
pub fn rho_critical(model: &GreensModel) -> Result<RhoCritical, PotentialError> {
    if model.source_set.len() < 2 {
        return Err(PotentialError::NoSaddle);
    }
    let mut candidates: Vec<CriticalSource> = find_saddles(model)
        .into_iter()
        .map(CriticalSource::Saddle)
        .chain(polar_sources(model))
        .filter(|c| c.g_value() > 0.0)
        .collect();
    candidates.sort_by(|a, b| a.g_value().total_cmp(&b.g_value()));
    for source in candidates {
        let t = source.g_value();
        let below = level_curve_family(model, t * (1.0 - LEVEL_EPS)).is_ok();
        let above = level_curve_family(model, t * (1.0 + LEVEL_EPS)).is_ok();
        if below && !above {
            log::debug!("critical potential {t} from {source:?}");
            return Ok(RhoCritical {
                rho: (-t).exp(),
                g_c: t,
                source,
            });
        }
        log::debug!("rejected critical candidate {t} (below {below}, above {above})");
    }
    Err(PotentialError::NoSaddle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CompactSet;
    use crate::potential::{fit_greens, GreensParams};
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    fn model(components: Vec<Component>) -> GreensModel {
        fit_greens(&CompactSet::new(components).unwrap(), &GreensParams::default()).unwrap()
    }

    #[test]
    fn symmetric_pair_has_one_saddle_at_origin() {
        let m = model(vec![
            Component::disk(c(-2.0, 0.0), 1.0).unwrap(),
            Component::disk(c(2.0, 0.0), 1.0).unwrap(),
        ]);
        let s = find_saddles(&m);
        assert_eq!(s.len(), 1, "{s:?}");
        assert!(s[0].location.norm() < 1e-8);
        assert_eq!(s[0].hessian_signature, Signature::Indefinite);
        assert!(s[0].gradient_norm < 1e-10);
    }

    #[test]
    fn single_disk_has_no_saddle() {
        let m = model(vec![Component::disk(c(0.0, 0.0), 1.0).unwrap()]);
        assert!(find_saddles(&m).is_empty());
        assert!(matches!(rho_critical(&m), Err(PotentialError::NoSaddle)));
    }

    #[test]
    fn three_symmetric_disks_meet_in_a_monkey_saddle() {
        let m = model(
            (0..3)
                .map(|k| Component::disk(Point::from_polar(3.0, TAU * k as f64 / 3.0), 1.0).unwrap())
                .collect(),
        );
        let s = find_saddles(&m);
        assert_eq!(s.len(), 1, "{s:?}");
        assert!(s[0].location.norm() < 1e-4);
        assert_eq!(s[0].hessian_signature, Signature::Degenerate);
        let rc = rho_critical(&m).unwrap();
        assert!(rc.rho > 0.0 && rc.rho < 1.0);
    }

    #[test]
    fn disk_and_point_critical_value() {
        let m = model(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::point(c(2.0, 0.0)).unwrap(),
        ]);
        let rc = rho_critical(&m).unwrap();
        assert!((rc.rho - 0.5).abs() < 1e-12);
        assert!(matches!(rc.source, CriticalSource::Polar { component: 1, .. }));
    }

    #[test]
    fn two_disks_critical_value() {
        let m = model(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::disk(c(4.0, 0.0), 1.0).unwrap(),
        ]);
        let rc = rho_critical(&m).unwrap();
        assert!(rc.rho > 1.0 / 3.0 && rc.rho < 1.0);
        assert!((rc.source.location() - c(2.0, 0.0)).norm() < 1e-8);
    }
}
