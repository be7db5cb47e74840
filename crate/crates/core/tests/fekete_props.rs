use acf_core::experiments::scenario_library;
use acf_core::fekete::{decay_check, leja_points, nth_diameter};
use acf_core::geometry::offset_curve_family;
use acf_core::potential::{fit_greens, theta_for_family};
use acf_core::Point;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn diameter_scales_with_dilation(
        angle in 0.0..std::f64::consts::TAU,
        log_scale in -3.0f64..3.0,
        sx in -100.0f64..100.0,
        sy in -100.0f64..100.0,
        n in 2usize..30,
        which in 0usize..6,
    ) {
        let s = &scenario_library()[which];
        let cfg = leja_points(&s.set, n, None).unwrap();
        let a = Point::from_polar(log_scale.exp(), angle);
        let moved = cfg.transformed(a, Point::new(sx, sy));
        let (d0, d1) = (nth_diameter(&cfg), nth_diameter(&moved));
        prop_assert!((d1 - a.norm() * d0).abs() <= 1e-12 * d1, "{d0} {d1}");
    }
}

#[test]
fn decay_tail_stays_near_theta() {
    for s in scenario_library() {
        let model = fit_greens(&s.set, &s.greens_params).unwrap();
        let family = offset_curve_family(&s.set, s.curve_margin).unwrap();
        let theta = theta_for_family(&model, &family).unwrap();
        let c = (theta + 0.1).min(0.999);
        let report = decay_check(&model, &family, c, (20, 80)).unwrap();
        assert!(
            report.tail_max_root() <= theta + 0.05,
            "{}: tail {} vs θ {theta}",
            s.name,
            report.tail_max_root()
        );
    }
}
