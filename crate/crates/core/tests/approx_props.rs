use acf_core::approx::{
    approximation_nodes, dn_sequence, gram_deviation, minimax_fit, rho_from_dn, walsh_interpolant,
    ArnoldiBasis, PiecewisePolynomial, DEFAULT_DENSITY,
};
use acf_core::experiments::scenario_library;
use acf_core::geometry::{offset_curve_family, CompactSet, Component};
use acf_core::Point;
use proptest::prelude::*;

fn two_disks(gap: f64) -> CompactSet {
    CompactSet::new(vec![
        Component::disk(Point::new(0.0, 0.0), 1.0).unwrap(),
        Component::disk(Point::new(2.0 + gap, 0.0), 1.0).unwrap(),
    ])
    .unwrap()
}

#[test]
fn dn_nested_on_library() {
    for s in scenario_library() {
        for f in &s.functions {
            let seq = dn_sequence(f, &s.set, s.degree_max, s.density).unwrap();
            for w in seq.rows.windows(2) {
                assert!(w[1].d_n <= w[0].d_n + 1e-12, "{} n = {}", s.name, w[1].n);
            }
            for r in &seq.rows {
                assert!(r.lower_bound <= r.raw * (1.0 + 1e-12), "{} n = {}", s.name, r.n);
            }
        }
    }
}

#[test]
fn basis_orthonormal_at_degree_40() {
    for s in scenario_library() {
        let nodes = approximation_nodes(&s.set, DEFAULT_DENSITY).unwrap();
        let points: Vec<Point> = nodes.iter().map(|n| n.point).collect();
        let (_, cols) = ArnoldiBasis::build(&points, 40).unwrap();
        let dev = gram_deviation(&cols);
        assert!(dev <= 1e-8, "{}: {dev:e}", s.name);
    }
}

#[test]
fn walsh_bound_on_library() {
    for s in scenario_library() {
        let family = offset_curve_family(&s.set, s.curve_margin).unwrap();
        for m in 2..=40 {
            let r = walsh_interpolant(&s.functions[0], &s.set, &family, m).unwrap();
            assert!(
                r.bound_holds,
                "{} m = {m}: {:e} > {:e}",
                s.name,
                r.measured_error,
                r.bound
            );
        }
    }
}

#[test]
fn density_doubling_moves_dn_little() {
    for s in scenario_library() {
        let f = &s.functions[0];
        let a = dn_sequence(f, &s.set, s.window.1, s.density).unwrap();
        let b = dn_sequence(f, &s.set, s.window.1, 2.0 * s.density).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            let rel = (x.d_n - y.d_n).abs() / y.d_n;
            assert!(rel < 1e-3, "{} n = {}: {rel:e}", s.name, x.n);
        }
    }
}

#[test]
fn wider_gap_converges_faster() {
    let f = PiecewisePolynomial::from_real(&[&[0.0], &[1.0]]).unwrap();
    let rho: Vec<f64> = [1.0, 2.0, 4.0]
        .iter()
        .map(|&gap| {
            let set = two_disks(gap);
            let seq = dn_sequence(&f, &set, 35, DEFAULT_DENSITY).unwrap();
            rho_from_dn(&seq.values(), seq.f_norm, (15, 35)).unwrap().value
        })
        .collect();
    assert!(rho[0] > rho[1] && rho[1] > rho[2], "{rho:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn error_is_max_residual(which in 0usize..6, n in 0usize..12) {
        let s = &scenario_library()[which];
        let f = &s.functions[0];
        let fit = minimax_fit(f, &s.set, n).unwrap();
        let nodes = approximation_nodes(&s.set, DEFAULT_DENSITY).unwrap();
        let max_residual = nodes
            .iter()
            .map(|x| (f.eval(x.component, x.point) - fit.eval(x.point)).norm())
            .fold(0.0, f64::max);
        prop_assert!((max_residual - fit.error).abs() <= 1e-12, "{} {}", max_residual, fit.error);
        prop_assert!(fit.coefficients.len() == n + 1);
    }
}
