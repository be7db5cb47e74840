use acf_core::experiments::scenario_library;
use acf_core::geometry::{
    local_ratio, lower_bound, offset_curve_family, winding_number, CompactSet, Component,
};
use acf_core::Point;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Point {
    Point::new(re, im)
}

fn disk_square() -> CompactSet {
    CompactSet::new(vec![
        Component::rectangle(0.0, 0.0, 1.0, 1.0).unwrap(),
        Component::disk(c(3.0, 0.5), 0.75).unwrap(),
        Component::segment(c(0.0, 2.5), c(2.0, 3.0)).unwrap(),
    ])
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lower_bound_is_similarity_invariant(
        angle in 0.0..std::f64::consts::TAU,
        log_scale in -2.0f64..2.0,
        sx in -50.0f64..50.0,
        sy in -50.0f64..50.0,
        which in 0usize..3,
    ) {
        let set = match which {
            0 => scenario_library()[3].set.clone(),
            1 => scenario_library()[5].set.clone(),
            _ => disk_square(),
        };
        let base = lower_bound(&set).unwrap().value;
        let moved = set.transformed(Point::from_polar(log_scale.exp(), angle), c(sx, sy));
        let v = lower_bound(&moved).unwrap().value;
        prop_assert!((v - base).abs() <= 1e-9, "{base} vs {v}");
    }

    #[test]
    fn distance_is_lipschitz(
        x1 in -4.0f64..5.0, y1 in -3.0f64..4.0,
        x2 in -4.0f64..5.0, y2 in -3.0f64..4.0,
    ) {
        let set = disk_square();
        let (z1, z2) = (c(x1, y1), c(x2, y2));
        for comp in set.components() {
            let (d1, d2) = (comp.distance(z1), comp.distance(z2));
            prop_assert!((d1 - d2).abs() <= (z1 - z2).norm() + 1e-12);
            prop_assert_eq!(d1 == 0.0, comp.contains(z1));
        }
    }

    #[test]
    fn local_ratio_in_unit_interval(x in -0.5f64..4.0, y in -0.5f64..1.5) {
        let set = disk_square();
        for j in 0..set.len() {
            let r = local_ratio(&set, j, c(x, y)).unwrap();
            prop_assert!((0.0..1.0).contains(&r), "{r}");
        }
    }
}

#[test]
fn local_ratio_vanishes_on_boundaries() {
    let set = disk_square();
    for (j, z) in set.sample_boundary(8.0) {
        let r = local_ratio(&set, j, z).unwrap();
        // circle samples are only within rounding of the boundary
        if matches!(set.component(j), Component::Disk { .. }) {
            assert!(r.abs() < 1e-15, "{r}");
        } else {
            assert_eq!(r, 0.0);
        }
    }
}

#[test]
fn library_families_wind_correctly() {
    for s in scenario_library() {
        let family = offset_curve_family(&s.set, s.curve_margin).unwrap();
        for (i, curve) in family.curves().iter().enumerate() {
            for (j, z) in s.set.sample_boundary(4.0) {
                let w = winding_number(curve, z).unwrap();
                assert_eq!(w, i64::from(i == j), "{} curve {i} around component {j}", s.name);
            }
            for (k, other) in family.curves().iter().enumerate() {
                if k != i {
                    for &z in other.nodes().iter().step_by(16) {
                        assert_eq!(winding_number(curve, z).unwrap(), 0);
                    }
                }
            }
        }
    }
}

#[test]
fn bound_increases_as_point_moves_in() {
    let bound = |h: f64| {
        let set = CompactSet::new(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::point(c(h, 0.0)).unwrap(),
        ])
        .unwrap();
        lower_bound(&set).unwrap().value
    };
    let values: Vec<f64> = [4.0, 3.0, 2.5, 2.0, 1.5, 1.2].iter().map(|&h| bound(h)).collect();
    for (w, h) in values.windows(2).zip([3.0, 2.5, 2.0, 1.5, 1.2]) {
        assert!(w[1] > w[0]);
        assert!((w[1] - 1.0 / h).abs() < 1e-9);
    }
}
