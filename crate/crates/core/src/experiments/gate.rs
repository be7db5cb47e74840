use serde::{Deserialize, Serialize};

use super::{ExperimentError, Scenario};
use crate::approx::{dn_sequence, rho_from_dn, DnSequence, RhoEstimate};
use crate::geometry::lower_bound;
use crate::potential::{fit_greens, rho_critical, PotentialError};

/// Allowed shortfall of an estimate below the geometric lower bound.
pub const GATE_SLACK: f64 = 0.02;
/// Allowed spread of the slope estimates across target functions.
pub const INDEPENDENCE_TOL: f64 = 0.02;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub scenario: String,
    pub lower_bound: f64,
    /// `None` when the set has no fat component.
    pub rho_critical: Option<f64>,
    /// One slope estimate per target function.
    pub rho_dn: Vec<RhoEstimate>,
    pub sequences: Vec<DnSequence>,
    /// Largest difference between two slope estimates.
    pub f_spread: f64,
    pub independent: bool,
    pub pass: bool,
    pub violations: Vec<String>,
}

/// Computes the geometric lower bound and every available ρ estimate, and
/// checks that no estimate falls more than [`GATE_SLACK`] below the bound.
pub fn gate_theorem(s: &Scenario) -> Result<GateReport, ExperimentError> {
    s.validate()?;
    let name = s.name.as_str();
    let lb = lower_bound(&s.set).map_err(|e| ExperimentError::upstream(name, e))?.value;

    let rho_c = match fit_greens(&s.set, &s.greens_params) {
        Ok(model) => Some(
            rho_critical(&model)
                .map_err(|e| ExperimentError::upstream(name, e))?
                .rho,
        ),
        Err(PotentialError::NoFatComponent) => None,
        Err(e) => return Err(ExperimentError::upstream(name, e)),
    };

    let mut rho_dn = Vec::new();
    let mut sequences = Vec::new();
    for f in &s.functions {
        let seq = dn_sequence(f, &s.set, s.degree_max, s.density).map_err(|e| ExperimentError::upstream(name, e))?;
        let est = rho_from_dn(&seq.values(), seq.f_norm, s.window).map_err(|e| ExperimentError::upstream(name, e))?;
        rho_dn.push(est);
        sequences.push(seq);
    }

    let mut violations = Vec::new();
    if let Some(r) = rho_c {
        if r < lb - GATE_SLACK {
            violations.push(format!("rho_critical {r:.6} < lower bound {lb:.6} - {GATE_SLACK}"));
        }
    }
    for (i, est) in rho_dn.iter().enumerate() {
        if est.value < lb - GATE_SLACK {
            violations.push(format!(
                "rho_dn[{i}] {:.6} < lower bound {lb:.6} - {GATE_SLACK}",
                est.value
            ));
        }
    }
    let values: Vec<f64> = rho_dn.iter().map(|e| e.value).collect();
    let f_spread = values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - values.iter().copied().fold(f64::INFINITY, f64::min);
    let report = GateReport {
        scenario: s.name.clone(),
        lower_bound: lb,
        rho_critical: rho_c,
        rho_dn,
        sequences,
        f_spread,
        independent: f_spread <= INDEPENDENCE_TOL,
        pass: violations.is_empty(),
        violations,
    };
    if !report.pass {
        log::warn!("gate fails on {}: {:?}", report.scenario, report.violations);
    }
    Ok(report)
}
