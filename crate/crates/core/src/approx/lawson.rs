use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::basis::ArnoldiBasis;
use super::{approximation_nodes, target_values, ApproxError, PiecewisePolynomial, DEFAULT_DENSITY, MAX_DEGREE};
use crate::geometry::CompactSet;
use crate::Point;

const MAX_ITER: usize = 500;
const STALL_WINDOW: usize = 10;
const STALL_TOL: f64 = 1e-10;
/// Relative gap between the sup-norm error and the weighted least-squares
/// lower bound at which the iteration stops.
const GAP_TOL: f64 = 1e-3;
/// Weights below this fraction of the largest weight are skipped.
const WEIGHT_FLOOR: f64 = 1e-15;
/// Below this error relative to `‖F‖` the solves switch to QR.
const QR_SWITCH: f64 = 1e-6;

/// Best discrete approximation of one degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimaxResult {
    pub degree: usize,
    /// Max residual over the nodes of the returned approximant.
    pub error: f64,
    /// Largest weighted least-squares residual seen; no degree-`n` polynomial
    /// does better than this on the nodes.
    pub lower_bound: f64,
    /// Coefficients in the orthonormal basis.
    pub coefficients: Vec<Point>,
    pub basis: ArnoldiBasis,
    pub iterations: usize,
    pub converged: bool,
}

impl MinimaxResult {
    pub fn eval(&self, z: Point) -> Point {
        self.basis.eval(&self.coefficients, z)
    }
}

/// Row-major basis values: row `i` holds `q_0(x_i), …, q_N(x_i)`.
pub(crate) struct Design {
    rows: Vec<Point>,
    stride: usize,
    m: usize,
}

impl Design {
    pub(crate) fn new(columns: &[Vec<Point>]) -> Self {
        let stride = columns.len();
        let m = columns[0].len();
        let mut rows = vec![Point::new(0.0, 0.0); m * stride];
        for (k, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                rows[i * stride + k] = *v;
            }
        }
        Design { rows, stride, m }
    }

    fn row(&self, i: usize, k: usize) -> &[Point] {
        &self.rows[i * self.stride..i * self.stride + k]
    }
}

pub(crate) struct LawsonOutcome {
    pub coefficients: Vec<Point>,
    pub error: f64,
    pub lower_bound: f64,
    pub iterations: usize,
    pub converged: bool,
    pub weights: Vec<f64>,
}

/// Householder QR of the row-weighted design.
fn weighted_solve_qr(design: &Design, f: &[Point], w: &[f64], k: usize) -> Option<Vec<Point>> {
    let wmax = w.iter().copied().fold(0.0, f64::max);
    let active: Vec<usize> = (0..design.m).filter(|&i| w[i] > WEIGHT_FLOOR * wmax).collect();
    if active.len() < k {
        return None;
    }
    let sw: Vec<f64> = active.iter().map(|&i| w[i].sqrt()).collect();
    let a = DMatrix::from_fn(active.len(), k, |r, q| design.row(active[r], k)[q] * sw[r]);
    let mut b = DVector::from_fn(active.len(), |r, _| f[active[r]] * sw[r]);
    let qr = a.qr();
    qr.q_tr_mul(&mut b);
    let c = qr.r().solve_upper_triangular(&b.rows(0, k).into_owned())?;
    c.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then(|| c.iter().copied().collect())
}

/// Real and imaginary parts of the first `k` basis columns, for the normal
/// equations.
struct SplitDesign {
    re: DMatrix<f64>,
    im: DMatrix<f64>,
    re_t: DMatrix<f64>,
    im_t: DMatrix<f64>,
}

impl SplitDesign {
    fn new(design: &Design, k: usize) -> Self {
        let re = DMatrix::from_fn(design.m, k, |i, q| design.row(i, k)[q].re);
        let im = DMatrix::from_fn(design.m, k, |i, q| design.row(i, k)[q].im);
        SplitDesign {
            re_t: re.transpose(),
            im_t: im.transpose(),
            re,
            im,
        }
    }
}

/// Weighted normal equations; squares the conditioning, so only used while
/// the residual is large relative to `F`.
fn weighted_solve_normal(split: &SplitDesign, f: &[Point], w: &[f64]) -> Option<Vec<Point>> {
    let wmax = w.iter().copied().fold(0.0, f64::max);
    let k = split.re.ncols();
    let wf = |i: usize| if w[i] > WEIGHT_FLOOR * wmax { w[i] } else { 0.0 };
    let mut xw = split.re.clone();
    let mut yw = split.im.clone();
    for i in 0..xw.nrows() {
        let wi = wf(i);
        xw.row_mut(i).scale_mut(wi);
        yw.row_mut(i).scale_mut(wi);
    }
    let gr = &split.re_t * &xw + &split.im_t * &yw;
    let gi = &split.re_t * &yw - &split.im_t * &xw;
    let fr = DVector::from_iterator(f.len(), f.iter().map(|v| v.re));
    let fi = DVector::from_iterator(f.len(), f.iter().map(|v| v.im));
    // conj(A)ᵀ W f with A = X + iY, f = u + iv.
    let br = xw.tr_mul(&fr) + yw.tr_mul(&fi);
    let bi = xw.tr_mul(&fi) - yw.tr_mul(&fr);
    let mut mat = DMatrix::from_fn(k, k, |p, q| Point::new(gr[(p, q)], gi[(p, q)]));
    let b = DVector::from_fn(k, |p, _| Point::new(br[p], bi[p]));
    if let Some(ch) = mat.clone().cholesky() {
        return Some(ch.solve(&b).iter().copied().collect());
    }
    let ridge = 1e-13 * (0..k).map(|p| mat[(p, p)].re).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for p in 0..k {
        mat[(p, p)] += Point::new(ridge, 0.0);
    }
    mat.cholesky().map(|ch| ch.solve(&b).iter().copied().collect())
}

/// Lawson iteration for the degree whose basis has `k` columns. `scale` is
/// the expected error size (the previous degree's error, or `‖F‖`).
pub(crate) fn lawson(
    design: &Design,
    f: &[Point],
    k: usize,
    start: Option<&[f64]>,
    scale: f64,
) -> LawsonOutcome {
    let m = design.m;
    let f_norm = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut w: Vec<f64> = match start {
        Some(s) => s.iter().map(|x| 0.5 * x + 0.5 / m as f64).collect(),
        None => vec![1.0 / m as f64; m],
    };
    let mut best = LawsonOutcome {
        coefficients: vec![Point::new(0.0, 0.0); k],
        error: f_norm,
        lower_bound: 0.0,
        iterations: 0,
        converged: false,
        weights: w.clone(),
    };
    let split = SplitDesign::new(design, k);
    let mut history = Vec::with_capacity(MAX_ITER);
    let mut r = vec![0.0f64; m];
    for it in 1..=MAX_ITER {
        best.iterations = it;
        let qr = scale.min(best.error) < QR_SWITCH * f_norm;
        let solved = if qr {
            weighted_solve_qr(design, f, &w, k)
        } else {
            weighted_solve_normal(&split, f, &w)
        };
        let Some(c) = solved else {
            break;
        };
        let mut err: f64 = 0.0;
        let mut ls = 0.0;
        for i in 0..m {
            let approx: Point = design.row(i, k).iter().zip(&c).map(|(a, b)| a * b).sum();
            r[i] = (f[i] - approx).norm();
            err = err.max(r[i]);
            ls += w[i] * r[i] * r[i];
        }
        best.lower_bound = best.lower_bound.max(ls.sqrt().min(err));
        if err < best.error {
            best.error = err;
            best.coefficients = c;
            best.weights = w.clone();
        }
        history.push((best.error, best.lower_bound));
        if best.error <= 1e-14 * f_norm.max(1.0)
            || best.error - best.lower_bound <= GAP_TOL * best.error
        {
            best.converged = true;
            break;
        }
        // Stalled when neither the best error nor the lower bound moved.
        if it > STALL_WINDOW && {
            let (e0, l0) = history[it - 1 - STALL_WINDOW];
            e0 - best.error < STALL_TOL * best.error && best.lower_bound - l0 < STALL_TOL * best.error
        } {
            best.converged = true;
            break;
        }
        let mut total = 0.0;
        for i in 0..m {
            w[i] *= r[i];
            total += w[i];
        }
        if !(total > 0.0) {
            best.converged = true;
            break;
        }
        for wi in w.iter_mut() {
            *wi /= total;
        }
    }
    best
}

/// Discrete minimax approximation of `F` by polynomials of degree ≤ `n` on
/// the default node set.
pub fn minimax_fit(f: &PiecewisePolynomial, set: &CompactSet, n: usize) -> Result<MinimaxResult, ApproxError> {
    minimax_fit_on(f, set, n, DEFAULT_DENSITY)
}

/// [`minimax_fit`] with an explicit node density.
pub fn minimax_fit_on(
    f: &PiecewisePolynomial,
    set: &CompactSet,
    n: usize,
    density: f64,
) -> Result<MinimaxResult, ApproxError> {
    f.check_against(set)?;
    let nodes = approximation_nodes(set, density)?;
    let points: Vec<Point> = nodes.iter().map(|x| x.point).collect();
    let (basis, cols) = ArnoldiBasis::build(&points, n)?;
    let values = target_values(f, &nodes);
    let out = lawson(&Design::new(&cols), &values, n + 1, None, 0.0);
    if !out.converged {
        log::warn!("Lawson iteration at degree {n} hit the iteration cap");
    }
    Ok(MinimaxResult {
        degree: n,
        error: out.error,
        lower_bound: out.lower_bound,
        coefficients: out.coefficients,
        basis,
        iterations: out.iterations,
        converged: out.converged,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnRow {
    pub n: usize,
    /// Running minimum of the computed errors.
    pub d_n: f64,
    /// Error of the degree-`n` fit itself.
    pub raw: f64,
    pub lower_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl DnRow {
    /// `d_n^{1/n}` (`d_0` for `n = 0`).
    pub fn root(&self) -> f64 {
        if self.n == 0 {
            self.d_n
        } else {
            self.d_n.powf(1.0 / self.n as f64)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnSequence {
    pub rows: Vec<DnRow>,
    /// `‖F‖` over the nodes.
    pub f_norm: f64,
    pub density: f64,
    pub nodes: usize,
}

impl DnSequence {
    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.d_n).collect()
    }
}

/// Minimax errors for degrees `0..=n_max`, each fit warm-started from the
/// weights of the previous degree.
pub fn dn_sequence(
    f: &PiecewisePolynomial,
    set: &CompactSet,
    n_max: usize,
    density: f64,
) -> Result<DnSequence, ApproxError> {
    if n_max > MAX_DEGREE {
        return Err(ApproxError::InvalidArgument(format!(
            "n_max must be at most {MAX_DEGREE}, got {n_max}"
        )));
    }
    f.check_against(set)?;
    let nodes = approximation_nodes(set, density)?;
    let points: Vec<Point> = nodes.iter().map(|x| x.point).collect();
    let (_, cols) = ArnoldiBasis::build(&points, n_max)?;
    let design = Design::new(&cols);
    let values = target_values(f, &nodes);
    let f_norm = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut weights: Option<Vec<f64>> = None;
    let mut running = f64::INFINITY;
    for n in 0..=n_max {
        let out = lawson(&design, &values, n + 1, weights.as_deref(), running);
        if out.error > running {
            log::debug!("d_{n} = {:e} exceeds d_{} = {running:e}; keeping the minimum", out.error, n - 1);
        }
        running = running.min(out.error);
        rows.push(DnRow {
            n,
            d_n: running,
            raw: out.error,
            lower_bound: out.lower_bound,
            iterations: out.iterations,
            converged: out.converged,
        });
        weights = Some(out.weights);
    }
    Ok(DnSequence {
        rows,
        f_norm,
        density,
        nodes: nodes.len(),
    })
}
