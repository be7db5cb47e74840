use serde::{Deserialize, Serialize};

use super::{CompactSet, GeometryError};
use crate::optimize::nelder_mead;
use crate::Point;

/// Grid resolution per axis used to seed the local searches.
const GRID: usize = 64;
/// Number of best grid points refined by Nelder–Mead.
const SEEDS: usize = 4;

/// Largest distance ratio found, with the component and point that realize it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub component: usize,
    pub argmax: Point,
}

/// `dist(z, K_jᶜ) / dist(z, L ∖ K_j)`.
pub fn local_ratio(set: &CompactSet, j: usize, z: Point) -> Result<f64, GeometryError> {
    if set.len() < 2 {
        return Err(GeometryError::UndefinedRatio);
    }
    if j >= set.len() {
        return Err(GeometryError::InvalidArgument(format!(
            "component index {j} out of range"
        )));
    }
    Ok(ratio(set, j, z))
}

fn ratio(set: &CompactSet, j: usize, z: Point) -> f64 {
    let num = set.component(j).distance_to_complement(z);
    if num <= 0.0 {
        return 0.0;
    }
    num / set.distance_excluding(j, z)
}

/// Maximum of the distance ratio over the interiors of all components.
///
/// Components without interior contribute 0.
pub fn lower_bound(set: &CompactSet) -> Result<LowerBound, GeometryError> {
    if set.len() < 2 {
        return Err(GeometryError::UndefinedRatio);
    }
    let fat = set.fat_indices();
    if fat.is_empty() {
        return Err(GeometryError::NoInterior);
    }
    let mut best = LowerBound {
        value: 0.0,
        component: fat[0],
        argmax: set.component(fat[0]).reference_point(),
    };
    for &j in &fat {
        let c = set.component(j);
        let (lo, hi) = c.bounding_box();
        let h = (hi - lo) / GRID as f64;
        let mut grid: Vec<(f64, Point)> = vec![(ratio(set, j, c.reference_point()), c.reference_point())];
        for a in 0..=GRID {
            for b in 0..=GRID {
                let z = Point::new(lo.re + h.re * a as f64, lo.im + h.im * b as f64);
                let r = ratio(set, j, z);
                if r > 0.0 {
                    grid.push((r, z));
                }
            }
        }
        grid.sort_by(|x, y| y.0.total_cmp(&x.0));
        let step = h.re.max(h.im);
        let scale = (hi - lo).norm().max(lo.norm()).max(hi.norm());
        for &(_, z0) in grid.iter().take(SEEDS) {
            let m = nelder_mead(
                |x| -ratio(set, j, Point::new(x[0], x[1])),
                &[z0.re, z0.im],
                step,
                1e-13 * scale,
                1e-14,
                4000,
            );
            let z = Point::new(m.x[0], m.x[1]);
            let r = ratio(set, j, z);
            if r > best.value {
                best = LowerBound {
                    value: r,
                    component: j,
                    argmax: z,
                };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Component;

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    fn disk_point(h0: f64) -> CompactSet {
        CompactSet::new(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::point(c(h0, 0.0)).unwrap(),
        ])
        .unwrap()
    }

    fn two_disks() -> CompactSet {
        CompactSet::new(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::disk(c(4.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn local_ratio_values() {
        assert_eq!(local_ratio(&disk_point(2.0), 0, c(0.0, 0.0)).unwrap(), 0.5);
        assert_eq!(local_ratio(&two_disks(), 0, c(0.0, 1.0)).unwrap(), 0.0);
        assert!((local_ratio(&two_disks(), 0, c(0.0, 0.0)).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let single = CompactSet::new(vec![Component::disk(c(0.0, 0.0), 1.0).unwrap()]).unwrap();
        assert!(matches!(
            local_ratio(&single, 0, c(0.0, 0.0)),
            Err(GeometryError::UndefinedRatio)
        ));
    }

    #[test]
    fn lower_bound_disk_point() {
        let lb = lower_bound(&disk_point(2.0)).unwrap();
        assert!((lb.value - 0.5).abs() < 1e-10);
        assert!(lb.argmax.norm() < 1e-8);
        assert_eq!(lb.component, 0);
    }

    #[test]
    fn lower_bound_two_disks() {
        let lb = lower_bound(&two_disks()).unwrap();
        assert!((lb.value - 1.0 / 3.0).abs() < 1e-10);
        let centre = if lb.component == 0 { c(0.0, 0.0) } else { c(4.0, 0.0) };
        assert!((lb.argmax - centre).norm() < 1e-8);
    }

    #[test]
    fn points_contribute_nothing() {
        let set = CompactSet::new(vec![
            Component::point(c(0.0, 0.0)).unwrap(),
            Component::point(c(5.0, 0.0)).unwrap(),
            Component::disk(c(10.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let lb = lower_bound(&set).unwrap();
        assert_eq!(lb.component, 2);
        assert!((lb.value - 0.2).abs() < 1e-10);
        let points = CompactSet::new(vec![
            Component::point(c(0.0, 0.0)).unwrap(),
            Component::point(c(5.0, 0.0)).unwrap(),
        ])
        .unwrap();
        assert!(matches!(lower_bound(&points), Err(GeometryError::NoInterior)));
    }

    #[test]
    fn bound_grows_as_point_approaches() {
        let mut last = 0.0;
        for h0 in [4.0, 3.0, 2.5, 2.0, 1.5] {
            let v = lower_bound(&disk_point(h0)).unwrap().value;
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn square_and_disk() {
        let set = CompactSet::new(vec![
            Component::rectangle(0.0, 0.0, 1.0, 1.0).unwrap(),
            Component::disk(c(4.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let lb = lower_bound(&set).unwrap();
        // Brute force over a fine grid never beats the refined value.
        let mut brute: f64 = 0.0;
        for j in [0usize, 1] {
            let (lo, hi) = set.component(j).bounding_box();
            for a in 0..=400 {
                for b in 0..=400 {
                    let z = c(
                        lo.re + (hi.re - lo.re) * a as f64 / 400.0,
                        lo.im + (hi.im - lo.im) * b as f64 / 400.0,
                    );
                    brute = brute.max(local_ratio(&set, j, z).unwrap());
                }
            }
        }
        assert!(lb.value >= brute - 1e-12);
        assert!(lb.value - brute < 1e-2);
    }
}
