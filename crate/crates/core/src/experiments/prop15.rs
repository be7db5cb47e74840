use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::Point;

/// Largest `N0` tried by the direct search.
const MAX_N0: usize = 1_000_000;
/// Nodes per circle for the norm and minimum evaluations.
const CIRCLE_NODES: usize = 4096;

/// Parameters of the two-disk construction around `h0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop15Parameters {
    pub h0: f64,
    pub delta0: f64,
    pub ell0: f64,
    pub r0: f64,
    pub big_n0: usize,
    pub eps0: f64,
    pub n0: usize,
}

/// One inequality, compared as `lhs < rhs` (or `≤`); large quantities are
/// given as logarithms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    fn less(name: &str, lhs: f64, rhs: f64) -> Self {
        InequalityCheck {
            name: name.to_string(),
            lhs,
            rhs,
            holds: lhs < rhs,
        }
    }

    fn at_most(name: &str, lhs: f64, rhs: f64) -> Self {
        InequalityCheck {
            name: name.to_string(),
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }
}

fn ln_pow_minus_one(base: f64, exp: f64) -> f64 {
    // ln(base^exp − 1) for base^exp > 1
    let a = exp * base.ln();
    a + (-(-a).exp()).ln_1p()
}

/// The `N0` conditions, in log form.
fn n0_checks(h0: f64, delta0: f64, ell0: f64, r0: f64, big_n0: usize) -> Vec<InequalityCheck> {
    let n = big_n0 as f64;
    vec![
        InequalityCheck::less("h0_minus_r0_power", 2f64.ln(), n * (h0 - r0).ln()),
        InequalityCheck::less("ratio_power", (2.0 * (h0 - ell0) / r0).ln(), n * ((h0 - r0) / ell0).ln()),
        InequalityCheck::less("ell0_power", 2f64.ln(), n * ell0.ln()),
        InequalityCheck::less(
            "root_rate",
            (8.0 * h0 / (h0 - ell0)).ln() / n - n / (n + 1.0) * ell0.ln(),
            (delta0 + 1.0 / h0).ln(),
        ),
    ]
}

impl Prop15Parameters {
    /// Validates every parameter condition; the first failing one is named in
    /// the error.
    pub fn new(h0: f64, delta0: f64, ell0: f64, r0: f64, big_n0: usize, eps0: f64, n0: usize) -> Result<Self, ExperimentError> {
        let p = Prop15Parameters {
            h0,
            delta0,
            ell0,
            r0,
            big_n0,
            eps0,
            n0,
        };
        if let Some(c) = p.parameter_checks().into_iter().find(|c| !c.holds) {
            return Err(ExperimentError::Infeasible {
                detail: format!("{} vs {}", c.lhs, c.rhs),
                inequality: c.name,
            });
        }
        Ok(p)
    }

    /// `ell0` and `r0` at the middle of their ranges, the smallest admissible
    /// `N0`, `eps0` at half its tightest bound and `n0 = 3`.
    pub fn choose(h0: f64, delta0: f64) -> Result<Self, ExperimentError> {
        if !(h0 > 1.0) {
            return Err(ExperimentError::Infeasible {
                inequality: "h0_above_one".into(),
                detail: format!("h0 = {h0}"),
            });
        }
        if !(delta0 > 0.0 && delta0 < 1.0 - 1.0 / h0) {
            return Err(ExperimentError::Infeasible {
                inequality: "delta0_range".into(),
                detail: format!("delta0 = {delta0} not in (0, {})", 1.0 - 1.0 / h0),
            });
        }
        let ell_lo = h0 / (delta0 * h0 + 1.0);
        let ell0 = 0.5 * (ell_lo + h0);
        let r0 = 0.5 * (h0 - ell0);
        let big_n0 = (1..=MAX_N0)
            .find(|&n| n0_checks(h0, delta0, ell0, r0, n).iter().all(|c| c.holds))
            .ok_or_else(|| ExperimentError::Infeasible {
                inequality: "n0_search".into(),
                detail: format!("no N0 ≤ {MAX_N0}"),
            })?;
        let eps0 = 0.5 * (0.5 * (2.0 * h0).powi(-(big_n0 as i32))).min(0.5 * r0).min(0.5 * (h0 - 1.0));
        Self::new(h0, delta0, ell0, r0, big_n0, eps0, 3)
    }

    /// Degree of the construction polynomial, `n0·N0 + n0`.
    pub fn degree(&self) -> usize {
        self.n0 * self.big_n0 + self.n0
    }

    /// Every condition on the parameters themselves.
    pub fn parameter_checks(&self) -> Vec<InequalityCheck> {
        let Prop15Parameters {
            h0,
            delta0,
            ell0,
            r0,
            big_n0,
            eps0,
            n0,
        } = *self;
        let mut out = vec![
            InequalityCheck::less("h0_above_one", 1.0, h0),
            InequalityCheck::less("delta0_positive", 0.0, delta0),
            InequalityCheck::less("delta0_below_gap", delta0, 1.0 - 1.0 / h0),
            InequalityCheck::less("ell0_lower", h0 / (delta0 * h0 + 1.0), ell0),
            InequalityCheck::less("ell0_upper", ell0, h0),
            InequalityCheck::less("r0_positive", 0.0, r0),
            InequalityCheck::less("r0_upper", r0, h0 - ell0),
            InequalityCheck::less("h0_minus_ell0", h0 - ell0, h0 - 1.0),
        ];
        out.extend(n0_checks(h0, delta0, ell0, r0, big_n0));
        out.extend([
            InequalityCheck::less("eps0_positive", 0.0, eps0),
            InequalityCheck::less(
                "eps0_power",
                eps0.ln(),
                0.5f64.ln() - big_n0 as f64 * (2.0 * h0).ln(),
            ),
            InequalityCheck::less("eps0_r0", eps0, 0.5 * r0),
            InequalityCheck::less("eps0_h0", eps0, 0.5 * (h0 - 1.0)),
            InequalityCheck::less("n0_min", 2.0, n0 as f64),
        ]);
        out
    }

    fn small_center(&self) -> Point {
        Point::new(self.h0 + self.eps0, 0.0)
    }
}

/// `ln|(z^{n0·N0} − 1)·Π_k (z − w_k)|` with `w_k = center + eps0·e^{2πik/n0}`.
///
/// When `local` is given, `z = center + eps0·local` and the factors
/// `z − w_k` are formed as `eps0·(local − e^{2πik/n0})`.
pub fn construction_log_abs(z: Point, big_n0: usize, n0: usize, center: Point, eps0: f64, local: Option<Point>) -> f64 {
    let power = n0 * big_n0;
    let r = z.norm();
    let lp1 = if r > 1.0 {
        let inv = (Point::new(1.0, 0.0) / z).powi(power as i32);
        power as f64 * r.ln() + (Point::new(1.0, 0.0) - inv).norm().ln()
    } else {
        (z.powi(power as i32) - 1.0).norm().ln()
    };
    let lp2: f64 = (0..n0)
        .map(|k| {
            let root = Point::from_polar(1.0, TAU * k as f64 / n0 as f64);
            match local {
                Some(u) => eps0.ln() + (u - root).norm().ln(),
                None => (z - (center + root * eps0)).norm().ln(),
            }
        })
        .sum();
    lp1 + lp2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop15Report {
    pub params: Prop15Parameters,
    pub degree: usize,
    /// `ln ‖p‖` over the boundary nodes of both disks.
    pub log_norm: f64,
    /// `ln min |p|` over the nodes of both circles.
    pub log_min: f64,
    /// `(‖p‖ / min |p|)^{1/deg p}`.
    pub final_value: f64,
    /// `delta0 + 1/h0`.
    pub target: f64,
    pub checks: Vec<InequalityCheck>,
    pub pass: bool,
}

/// Builds the unit disk plus the small disk `D̄(h0 + eps0, eps0)`, the
/// polynomial vanishing on `n0·N0` unit roots and `n0` points of the small
/// disk, and the circles `|z| = ell0`, `|z − (h0 + eps0)| = r0`, then checks
/// the norm and minimum estimates and the final rate.
pub fn prop15_scenario(h0: f64, delta0: f64) -> Result<Prop15Report, ExperimentError> {
    let params = Prop15Parameters::choose(h0, delta0)?;
    let Prop15Parameters {
        ell0,
        r0,
        big_n0,
        eps0,
        n0,
        ..
    } = params;
    let center = params.small_center();
    let m = n0 as f64;
    let nn = (n0 * big_n0) as f64;
    let degree = params.degree();
    let lp = |z: Point, local: Option<Point>| construction_log_abs(z, big_n0, n0, center, eps0, local);
    let unit = |k: usize| Point::from_polar(1.0, TAU * (k as f64 + 0.5) / CIRCLE_NODES as f64);

    let log_norm = (0..CIRCLE_NODES)
        .map(|k| {
            let u = unit(k);
            lp(u, None).max(lp(center + u * eps0, Some(u)))
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let log_min = (0..CIRCLE_NODES)
        .map(|k| {
            let u = unit(k);
            lp(u * ell0, None).min(lp(center + u * r0, None))
        })
        .fold(f64::INFINITY, f64::min);
    let log_ratio = log_norm - log_min;
    let final_value = (log_ratio / degree as f64).exp();
    let target = delta0 + 1.0 / h0;

    let norm_bound = 2f64.ln() + m * (h0 + 2.0 * eps0 + 1.0).ln();
    let min_bound = ln_pow_minus_one(ell0, nn) + m * (h0 - ell0).ln();
    let small_circle_bound = ln_pow_minus_one(h0 - r0 + eps0, nn) + m * (r0 - eps0).ln();
    let coarse = (2.0 * (2.0 * h0).powf(m)).ln() - (0.5f64.ln() + nn * ell0.ln() + m * (h0 - ell0).ln());

    let mut checks = params.parameter_checks();
    checks.extend([
        InequalityCheck::at_most(
            "small_disk_norm",
            2f64.ln() + m * ((2.0 * eps0).ln() + big_n0 as f64 * (h0 + 2.0 * eps0).ln()),
            norm_bound,
        ),
        InequalityCheck::at_most("norm_on_set", log_norm, norm_bound),
        InequalityCheck::at_most("curve_min_order", min_bound, small_circle_bound),
        InequalityCheck::at_most("min_on_curves", min_bound, log_min),
        InequalityCheck::at_most("ratio_bound", log_ratio, norm_bound - min_bound),
        InequalityCheck::less("coarse_ratio", norm_bound - min_bound, coarse),
        InequalityCheck::less("coarse_rate", coarse / degree as f64, target.ln()),
        InequalityCheck::less("final_rate", final_value, target),
        InequalityCheck::at_most("above_inverse_h0", 1.0 / h0 - 0.02, final_value),
    ]);
    let pass = checks.iter().all(|c| c.holds);
    Ok(Prop15Report {
        params,
        degree,
        log_norm,
        log_min,
        final_value,
        target,
        checks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_for_h0_two() {
        let p = Prop15Parameters::choose(2.0, 0.3).unwrap();
        assert!((p.ell0 - 1.625).abs() < 1e-15);
        assert!((p.r0 - 0.1875).abs() < 1e-15);
        assert_eq!(p.big_n0, 17);
        assert_eq!(p.n0, 3);
        assert_eq!(p.degree(), 54);
        assert!(p.eps0 > 0.0 && p.eps0 < 2e-11);
        // N0 − 1 fails one of the N0 conditions
        assert!(n0_checks(2.0, 0.3, p.ell0, p.r0, 16).iter().any(|c| !c.holds));
    }

    #[test]
    fn construction_passes() {
        let r = prop15_scenario(2.0, 0.3).unwrap();
        for c in &r.checks {
            assert!(c.holds, "{c:?}");
        }
        assert!(r.final_value < 0.8 && r.final_value > 0.48);
    }

    #[test]
    fn infeasible_delta_is_rejected() {
        assert!(matches!(
            prop15_scenario(2.0, 0.5),
            Err(ExperimentError::Infeasible { .. })
        ));
        let e = Prop15Parameters::new(2.0, 0.3, 1.625, 0.1875, 5, 1e-12, 3).unwrap_err();
        assert!(e.to_string().contains("root_rate") || e.to_string().contains("power"), "{e}");
    }

    #[test]
    fn log_evaluation_matches_direct() {
        let (big_n0, n0, eps0) = (9, 3, 0.01);
        let center = Point::new(2.01, 0.0);
        let direct = |z: Point| {
            let mut p = z.powi(27) - 1.0;
            for k in 0..3 {
                p *= z - (center + Point::from_polar(eps0, TAU * k as f64 / 3.0));
            }
            p.norm()
        };
        for z in [Point::new(0.3, 0.9), Point::new(1.625, 0.2), Point::new(2.0, 0.1), Point::new(-0.7, -0.7)] {
            let got = construction_log_abs(z, big_n0, n0, center, eps0, None).exp();
            assert!((got - direct(z)).abs() <= 1e-9 * direct(z), "{z}");
        }
        let u = Point::from_polar(1.0, 0.4);
        let z = center + u * eps0;
        let got = construction_log_abs(z, big_n0, n0, center, eps0, Some(u)).exp();
        assert!((got - direct(z)).abs() <= 1e-9 * direct(z));
    }
}
