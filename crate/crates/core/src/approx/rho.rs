use serde::{Deserialize, Serialize};

use super::ApproxError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoMethod {
    MinimaxSlope,
    CriticalPotential,
    ThetaDescent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoDiagnostic {
    pub n: usize,
    pub d_n: f64,
    /// `d_n^{1/n}`.
    pub root: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoEstimate {
    pub value: f64,
    pub method: RhoMethod,
    /// Degree range of the fit, if any.
    pub window: Option<(usize, usize)>,
    pub diagnostics: Vec<RhoDiagnostic>,
    /// Max of `d_n^{1/n}` over the upper half of the window.
    pub tail_max: Option<f64>,
}

impl RhoEstimate {
    /// An estimate that comes from a single number (critical potential or
    /// θ-descent) rather than a degree table.
    pub fn direct(value: f64, method: RhoMethod) -> Result<Self, ApproxError> {
        if !(value > 0.0 && value < 1.0) {
            return Err(ApproxError::InvalidArgument(format!("ρ = {value} is not in (0, 1)")));
        }
        Ok(RhoEstimate {
            value,
            method,
            window: None,
            diagnostics: Vec::new(),
            tail_max: None,
        })
    }
}

/// `exp` of the least-squares slope of `log d_n` against `n` over
/// `window = (lo, hi)` (inclusive); `dns[n]` is `d_n`.
pub fn rho_from_dn(dns: &[f64], f_norm: f64, window: (usize, usize)) -> Result<RhoEstimate, ApproxError> {
    let (lo, hi) = window;
    if lo >= hi || hi >= dns.len() {
        return Err(ApproxError::InvalidArgument(format!(
            "window [{lo}, {hi}] is not inside 0..{}",
            dns.len()
        )));
    }
    let floor = 10.0 * f64::EPSILON * f_norm;
    if let Some(n) = (lo..=hi).find(|&n| !(dns[n] > floor)) {
        return Err(ApproxError::WindowUnderflow { n });
    }
    let count = (hi - lo + 1) as f64;
    let mean_n = (lo..=hi).map(|n| n as f64).sum::<f64>() / count;
    let mean_y = (lo..=hi).map(|n| dns[n].ln()).sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for n in lo..=hi {
        let dx = n as f64 - mean_n;
        sxy += dx * (dns[n].ln() - mean_y);
        sxx += dx * dx;
    }
    let value = (sxy / sxx).exp();
    if !(value > 0.0 && value < 1.0) {
        return Err(ApproxError::InvalidArgument(format!(
            "d_n does not decay over [{lo}, {hi}] (fitted ratio {value})"
        )));
    }
    let diagnostics: Vec<RhoDiagnostic> = (lo..=hi)
        .map(|n| RhoDiagnostic {
            n,
            d_n: dns[n],
            root: if n == 0 { dns[n] } else { dns[n].powf(1.0 / n as f64) },
        })
        .collect();
    let mid = lo + (hi - lo) / 2;
    let tail_max = diagnostics
        .iter()
        .filter(|d| d.n >= mid)
        .map(|d| d.root)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(RhoEstimate {
        value,
        method: RhoMethod::MinimaxSlope,
        window: Some(window),
        diagnostics,
        tail_max: Some(tail_max),
    })
}
