use acf_core::experiments::{library_scenario, scenario_library};
use acf_core::geometry::{lower_bound, offset_curve_family, CompactSet, Component};
use acf_core::potential::{eval_greens, fit_greens, rho_critical, theta_for_family, GreensModel, GreensParams};
use acf_core::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model(set: &CompactSet) -> GreensModel {
    fit_greens(set, &GreensParams::default()).unwrap()
}

/// Points outside `set` by at least `gap`, inside its padded bounding box.
fn exterior_probes(set: &CompactSet, count: usize, gap: f64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = set.bounding_box();
    let pad = 0.5 * set.extent();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = Point::new(
            rng.random_range(lo.re - pad..hi.re + pad),
            rng.random_range(lo.im - pad..hi.im + pad),
        );
        if set.distance(z) > gap {
            out.push(z);
        }
    }
    out
}

#[test]
fn fresh_boundary_samples_stay_small() {
    for s in scenario_library() {
        let m = model(&s.set);
        let worst = s
            .set
            .sample_boundary(37.0)
            .into_iter()
            .filter(|(j, _)| m.modeled_components().contains(j))
            .map(|(_, z)| m.raw(z).abs())
            .fold(0.0, f64::max);
        assert!(
            worst <= 10.0 * m.collocation_residual.max(f64::EPSILON),
            "{}: {worst} vs residual {}",
            s.name,
            m.collocation_residual
        );
    }
}

#[test]
fn logarithmic_growth_at_infinity() {
    for s in scenario_library() {
        let m = model(&s.set);
        let centroid: Point = m
            .charge_points
            .iter()
            .zip(&m.charge_weights)
            .map(|(q, w)| q * w)
            .sum();
        let r = 1e4 * s.set.extent();
        for k in 0..16 {
            let z = centroid + Point::from_polar(r, 0.3 + k as f64 * 0.39);
            let err = (m.raw(z) - (z - centroid).norm().ln() - m.robin_constant).abs();
            assert!(err <= 1e-6, "{}: {err}", s.name);
            let plain = (m.raw(z) - z.norm().ln() - m.robin_constant).abs();
            assert!(plain <= centroid.norm() / r * 1.01 + 1e-6, "{}: {plain}", s.name);
        }
    }
}

#[test]
fn larger_sets_have_smaller_green_functions() {
    let disk = |x: f64, y: f64, r: f64| Component::disk(Point::new(x, y), r).unwrap();
    let three = library_scenario("three_symmetric_disks").unwrap().set;
    let pairs = vec![
        (
            CompactSet::new(vec![disk(0.0, 0.0, 1.0)]).unwrap(),
            library_scenario("two_equal_disks").unwrap().set,
        ),
        (
            CompactSet::new(three.components()[..2].to_vec()).unwrap(),
            three.clone(),
        ),
        (
            CompactSet::new(vec![disk(4.0, 0.0, 1.0)]).unwrap(),
            library_scenario("square_disk").unwrap().set,
        ),
    ];
    for (seed, (small, large)) in pairs.into_iter().enumerate() {
        let (ms, ml) = (model(&small), model(&large));
        for z in exterior_probes(&large, 100, 0.05, seed as u64) {
            let (gs, gl) = (eval_greens(&ms, z).unwrap().g, eval_greens(&ml, z).unwrap().g);
            assert!(gl <= gs + 1e-6, "{z}: {gl} > {gs}");
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    for s in scenario_library() {
        let m = model(&s.set);
        let h = 1e-6 * s.set.extent();
        let mut checked = 0;
        for z in exterior_probes(&s.set, 60, 0.1, 7) {
            let grad = eval_greens(&m, z).unwrap().gradient;
            if grad.norm() < 1e-2 {
                continue;
            }
            let dx = (m.raw(z + h) - m.raw(z - h)) / (2.0 * h);
            let dy = (m.raw(z + Point::new(0.0, h)) - m.raw(z - Point::new(0.0, h))) / (2.0 * h);
            let fd = Point::new(dx, dy);
            assert!((fd - grad).norm() <= 1e-5 * grad.norm(), "{}: {z} {grad} {fd}", s.name);
            checked += 1;
        }
        assert!(checked > 30);
    }
}

#[test]
fn theta_on_valid_families_dominates() {
    for s in scenario_library() {
        let m = model(&s.set);
        let rho = rho_critical(&m).unwrap().rho;
        let lb = lower_bound(&s.set).unwrap().value;
        for frac in [0.25, 0.5, 1.0] {
            let family = offset_curve_family(&s.set, frac * s.curve_margin).unwrap();
            let theta = theta_for_family(&m, &family).unwrap();
            assert!(theta >= rho - 1e-3, "{}: θ {theta} < ρ {rho}", s.name);
            assert!(theta >= lb, "{}: θ {theta} < bound {lb}", s.name);
        }
    }
}
