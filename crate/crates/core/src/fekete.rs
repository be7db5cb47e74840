//! Leja and small-n Fekete configurations, n-th diameters and the decay of
//! Fekete-type polynomials between a set and a curve family.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{CompactSet, Component, CurveFamily};
use crate::optimize::golden_max;
use crate::potential::{theta_for_family, GreenFunction, PotentialError};
use crate::Point;

/// Sweep cap of the discrete Fekete refinement.
pub const REFINE_SWEEPS: usize = 50;
/// Candidate nodes per unit boundary length.
pub const CANDIDATE_DENSITY: f64 = 64.0;
/// Largest degree accepted by [`decay_check`].
pub const MAX_DECAY_DEGREE: usize = 80;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeketeError {
    #[error("a configuration needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("{requested} points requested but only {available} candidates")]
    InsufficientCandidates { requested: usize, available: usize },
    #[error("points {0} and {1} coincide")]
    NotDistinct(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Leja,
    /// Leja start improved by single-point moves on the candidate grid.
    DiscreteFekete,
    Exact,
    Custom,
}

/// Distinct points, normally on a compact set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    points: Vec<Point>,
    generator: Generator,
}

impl PointConfiguration {
    pub fn new(points: Vec<Point>, generator: Generator) -> Result<Self, FeketeError> {
        if points.len() < 2 {
            return Err(FeketeError::TooFewPoints(points.len()));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(FeketeError::NotDistinct(i, j));
                }
            }
        }
        Ok(PointConfiguration { points, generator })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    /// The first `n` points (a Leja configuration stays Leja).
    pub fn prefix(&self, n: usize) -> Result<Self, FeketeError> {
        PointConfiguration::new(self.points[..n.min(self.points.len())].to_vec(), self.generator)
    }

    /// Image under `z ↦ scale·z + shift`.
    pub fn transformed(&self, scale: Point, shift: Point) -> Self {
        PointConfiguration {
            points: self.points.iter().map(|z| scale * z + shift).collect(),
            generator: self.generator,
        }
    }

    /// Largest distance from a point to the set.
    pub fn distance_to(&self, set: &CompactSet) -> f64 {
        self.points.iter().map(|&z| set.distance(z)).fold(0.0, f64::max)
    }

    /// `Σ_{i<j} log|z_i − z_j|`.
    pub fn log_product(&self) -> f64 {
        log_product(&self.points)
    }
}

fn log_product(points: &[Point]) -> f64 {
    let mut s = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            s += (points[i] - points[j]).norm().ln();
        }
    }
    s
}

/// Boundary candidates of the whole set; circles get a power-of-two count.
fn candidates(set: &CompactSet) -> Vec<Point> {
    let mut out = Vec::new();
    for comp in set.components() {
        match comp {
            Component::Disk { center, radius } => {
                let n = ((TAU * radius * CANDIDATE_DENSITY).ceil() as usize)
                    .max(16)
                    .next_power_of_two();
                out.extend((0..n).map(|k| center + Point::from_polar(*radius, TAU * k as f64 / n as f64)));
            }
            _ => out.extend(comp.sample_boundary(CANDIDATE_DENSITY)),
        }
    }
    out
}

fn farthest_pair_endpoint(cands: &[Point]) -> usize {
    let mut best = (0, -1.0);
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let d = (cands[i] - cands[j]).norm_sqr();
            if d > best.1 {
                best = (i, d);
            }
        }
    }
    best.0
}

/// Greedy Leja points over the boundary candidates of `set`.
///
/// The first point is the candidate nearest to `anchor`, or an endpoint of the
/// farthest candidate pair when `anchor` is `None`. Ties go to the lowest
/// candidate index.
pub fn leja_points(
    set: &CompactSet,
    n: usize,
    anchor: Option<Point>,
) -> Result<PointConfiguration, FeketeError> {
    if n < 2 {
        return Err(FeketeError::TooFewPoints(n));
    }
    let cands = candidates(set);
    if n > cands.len() {
        return Err(FeketeError::InsufficientCandidates {
            requested: n,
            available: cands.len(),
        });
    }
    let first = match anchor {
        Some(a) => (0..cands.len())
            .min_by(|&i, &j| (cands[i] - a).norm().total_cmp(&(cands[j] - a).norm()))
            .unwrap_or(0),
        None => farthest_pair_endpoint(&cands),
    };
    let mut score = vec![0.0f64; cands.len()];
    let mut chosen = vec![first];
    score[first] = f64::NEG_INFINITY;
    for _ in 1..n {
        let last = cands[*chosen.last().expect("nonempty")];
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        for (i, s) in score.iter_mut().enumerate() {
            if *s == f64::NEG_INFINITY {
                continue;
            }
            *s += (cands[i] - last).norm().ln();
            if *s > best.1 {
                best = (i, *s);
            }
        }
        score[best.0] = f64::NEG_INFINITY;
        chosen.push(best.0);
    }
    PointConfiguration::new(chosen.into_iter().map(|i| cands[i]).collect(), Generator::Leja)
}

/// A configuration on the candidate grid with the log-potential of every
/// candidate, `Σ_{j chosen, j ≠ k} ln|c_k − c_j|`.
struct GridConfiguration {
    cands: Vec<Point>,
    chosen: Vec<usize>,
    taken: Vec<bool>,
    potential: Vec<f64>,
}

impl GridConfiguration {
    fn start(cands: Vec<Point>, first: usize) -> Self {
        let potential = cands.iter().map(|z| (z - cands[first]).norm().ln()).collect::<Vec<_>>();
        let mut taken = vec![false; cands.len()];
        taken[first] = true;
        let mut g = GridConfiguration {
            cands,
            chosen: vec![first],
            taken,
            potential,
        };
        g.potential[first] = 0.0;
        g
    }

    fn add(&mut self, b: usize) {
        let zb = self.cands[b];
        for (k, z) in self.cands.iter().enumerate() {
            if k != b {
                self.potential[k] += (z - zb).norm().ln();
            }
        }
        self.taken[b] = true;
        self.chosen.push(b);
    }

    /// Adds the free candidate of largest potential (Leja step).
    fn push_greedy(&mut self) -> Option<()> {
        let b = (0..self.cands.len())
            .filter(|&k| !self.taken[k])
            .fold(None, |best: Option<usize>, k| match best {
                Some(i) if self.potential[i] >= self.potential[k] => Some(i),
                _ => Some(k),
            })?;
        self.add(b);
        Some(())
    }

    fn relocate(&mut self, slot: usize, b: usize) {
        let a = self.chosen[slot];
        let (za, zb) = (self.cands[a], self.cands[b]);
        for (k, z) in self.cands.iter().enumerate() {
            if k == a {
                self.potential[k] += (z - zb).norm().ln();
            } else if k == b {
                self.potential[k] -= (z - za).norm().ln();
            } else {
                self.potential[k] += ((z - zb) / (z - za)).norm().ln();
            }
        }
        self.taken[a] = false;
        self.taken[b] = true;
        self.chosen[slot] = b;
    }

    /// Moves single points to better free candidates until no move raises
    /// `Σ_{i<j} ln|x_i − x_j|` or `sweeps` passes are done.
    fn refine(&mut self, sweeps: usize) {
        for _ in 0..sweeps {
            let mut moved = false;
            for slot in 0..self.chosen.len() {
                let a = self.chosen[slot];
                let za = self.cands[a];
                let mut best = (a, self.potential[a]);
                for (k, z) in self.cands.iter().enumerate() {
                    if self.taken[k] {
                        continue;
                    }
                    let score = self.potential[k] - (z - za).norm().ln();
                    if score > best.1 + 1e-12 * best.1.abs().max(1.0) {
                        best = (k, score);
                    }
                }
                if best.0 != a {
                    self.relocate(slot, best.0);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }

    fn points(&self) -> Vec<Point> {
        self.chosen.iter().map(|&i| self.cands[i]).collect()
    }
}

fn grid_start(set: &CompactSet, n: usize) -> Result<GridConfiguration, FeketeError> {
    let cands = candidates(set);
    if n > cands.len() {
        return Err(FeketeError::InsufficientCandidates {
            requested: n,
            available: cands.len(),
        });
    }
    let first = farthest_pair_endpoint(&cands);
    let mut g = GridConfiguration::start(cands, first);
    while g.chosen.len() < n {
        g.push_greedy().expect("enough candidates");
    }
    Ok(g)
}

/// `n` Leja points refined toward a Fekete configuration on the candidate
/// grid by single-point moves.
pub fn discrete_fekete_points(set: &CompactSet, n: usize, sweeps: usize) -> Result<PointConfiguration, FeketeError> {
    if n < 2 {
        return Err(FeketeError::TooFewPoints(n));
    }
    let mut g = grid_start(set, n)?;
    g.refine(sweeps);
    PointConfiguration::new(g.points(), Generator::DiscreteFekete)
}

/// A boundary location given by component and parameter.
#[derive(Clone, Copy, Debug)]
struct Slot {
    component: usize,
    t: f64,
}

fn slot_point(set: &CompactSet, s: Slot) -> Point {
    match set.component(s.component) {
        Component::Segment { a, b } => a + (b - a) * s.t,
        c => c.boundary_point(s.t),
    }
}

fn slot_grid(set: &CompactSet) -> Vec<Slot> {
    let mut out = Vec::new();
    for (j, c) in set.components().iter().enumerate() {
        match c {
            Component::SinglePoint { .. } => out.push(Slot { component: j, t: 0.0 }),
            Component::Segment { a, b } => {
                let m = (((b - a).norm() * CANDIDATE_DENSITY).ceil() as usize).max(64);
                out.extend((0..=m).map(|k| Slot {
                    component: j,
                    t: k as f64 / m as f64,
                }));
            }
            _ => {
                let m = ((c.boundary_length() * CANDIDATE_DENSITY).ceil() as usize).max(64);
                out.extend((0..m).map(|k| Slot {
                    component: j,
                    t: k as f64 / m as f64,
                }));
            }
        }
    }
    out
}

/// Log-product of `points` with entry `i` replaced by `z`, relative terms only.
fn log_product_at(points: &[Point], i: usize, z: Point) -> f64 {
    points
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, w)| (z - w).norm().ln())
        .sum()
}

fn ascend(set: &CompactSet, grid: &[Slot], mut idx: Vec<usize>) -> (Vec<Slot>, f64) {
    let pts_of = |idx: &[usize]| idx.iter().map(|&k| slot_point(set, grid[k])).collect::<Vec<_>>();
    // Coordinate ascent over the grid.
    for _ in 0..100 {
        let mut improved = false;
        for i in 0..idx.len() {
            let pts = pts_of(&idx);
            let current = log_product_at(&pts, i, pts[i]);
            let mut best = (idx[i], current);
            for (k, s) in grid.iter().enumerate() {
                if idx.contains(&k) {
                    continue;
                }
                let v = log_product_at(&pts, i, slot_point(set, *s));
                if v > best.1 + 1e-14 {
                    best = (k, v);
                }
            }
            if best.0 != idx[i] {
                idx[i] = best.0;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    // Continuous refinement in the boundary parameter.
    let mut slots: Vec<Slot> = idx.iter().map(|&k| grid[k]).collect();
    let widths: Vec<f64> = slots
        .iter()
        .map(|s| {
            let m = grid.iter().filter(|g| g.component == s.component).count().max(2);
            1.0 / (m - 1) as f64
        })
        .collect();
    for _ in 0..30 {
        let before = log_product(&slots.iter().map(|&s| slot_point(set, s)).collect::<Vec<_>>());
        for i in 0..slots.len() {
            let comp = set.component(slots[i].component);
            if matches!(comp, Component::SinglePoint { .. }) {
                continue;
            }
            let pts: Vec<Point> = slots.iter().map(|&s| slot_point(set, s)).collect();
            let (lo, hi) = match comp {
                Component::Segment { .. } => (
                    (slots[i].t - widths[i]).max(0.0),
                    (slots[i].t + widths[i]).min(1.0),
                ),
                _ => (slots[i].t - widths[i], slots[i].t + widths[i]),
            };
            let j = slots[i].component;
            let f = |t: f64| log_product_at(&pts, i, slot_point(set, Slot { component: j, t }));
            let (t, v) = golden_max(f, lo, hi, 1e-13);
            let edge = [lo, hi].map(|t| (t, f(t)));
            let (t, v) = edge.into_iter().fold((t, v), |acc, e| if e.1 > acc.1 { e } else { acc });
            if v > f(slots[i].t) {
                slots[i].t = match comp {
                    Component::Segment { .. } => t,
                    _ => t.rem_euclid(1.0),
                };
            }
        }
        let after = log_product(&slots.iter().map(|&s| slot_point(set, s)).collect::<Vec<_>>());
        if after - before < 1e-15 * after.abs().max(1.0) {
            break;
        }
    }
    let value = log_product(&slots.iter().map(|&s| slot_point(set, s)).collect::<Vec<_>>());
    (slots, value)
}

/// Fekete points for `n ≤ 6` by multistart coordinate ascent on a boundary
/// grid followed by golden-section refinement of each point.
///
/// Starts are the Leja configuration plus `restarts` random grid configurations
/// drawn from a generator seeded with `seed`.
pub fn fekete_points_small(
    set: &CompactSet,
    n: usize,
    restarts: usize,
    seed: u64,
) -> Result<PointConfiguration, FeketeError> {
    if n < 2 {
        return Err(FeketeError::TooFewPoints(n));
    }
    if n > 6 {
        return Err(FeketeError::InvalidArgument(format!(
            "exact Fekete search supports n ≤ 6, got {n}"
        )));
    }
    let grid = slot_grid(set);
    if n > grid.len() {
        return Err(FeketeError::InsufficientCandidates {
            requested: n,
            available: grid.len(),
        });
    }
    let nearest = |z: Point| {
        (0..grid.len())
            .min_by(|&a, &b| {
                (slot_point(set, grid[a]) - z)
                    .norm()
                    .total_cmp(&(slot_point(set, grid[b]) - z).norm())
            })
            .unwrap_or(0)
    };
    let mut starts: Vec<Vec<usize>> = Vec::new();
    let mut leja: Vec<usize> = leja_points(set, n, None)?.points().iter().map(|&z| nearest(z)).collect();
    leja.sort_unstable();
    leja.dedup();
    if leja.len() == n {
        starts.push(leja);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while starts.len() < restarts + 1 {
        let mut idx: Vec<usize> = Vec::with_capacity(n);
        while idx.len() < n {
            let k = rng.random_range(0..grid.len());
            if !idx.contains(&k) {
                idx.push(k);
            }
        }
        starts.push(idx);
    }
    let mut best: Option<(Vec<Slot>, f64)> = None;
    for idx in starts {
        let (slots, v) = ascend(set, &grid, idx);
        if best.as_ref().is_none_or(|b| v > b.1) {
            best = Some((slots, v));
        }
    }
    let (slots, _) = best.expect("at least one start");
    PointConfiguration::new(
        slots.into_iter().map(|s| slot_point(set, s)).collect(),
        Generator::Exact,
    )
}

/// `(Π_{i<j} |z_i − z_j|)^{2/(n(n−1))}`, computed in log space.
pub fn nth_diameter(cfg: &PointConfiguration) -> f64 {
    let n = cfg.n() as f64;
    (2.0 * cfg.log_product() / (n * (n - 1.0))).exp()
}

/// n-th diameters on Leja prefixes and a capacity estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    /// `(n, δ_n)` for `n = 2..=n_max`.
    pub sequence: Vec<(usize, f64)>,
    /// Fitted limit `c` of `log δ_n = log c + a·log(n)/(n−1)` over
    /// the upper half of the range.
    pub extrapolated: f64,
    /// `δ_{n_max}`.
    pub last: f64,
    /// `|δ_{n_max/2} − δ_{n_max}|`.
    pub uncertainty: f64,
}

/// Capacity from n-th diameters of nested Leja configurations.
pub fn capacity_from_diameters(set: &CompactSet, n_max: usize) -> Result<CapacityEstimate, FeketeError> {
    if n_max < 8 {
        return Err(FeketeError::InvalidArgument(format!("n_max must be ≥ 8, got {n_max}")));
    }
    let cfg = leja_points(set, n_max, None)?;
    let pts = cfg.points();
    let mut sequence = Vec::with_capacity(n_max - 1);
    let mut logp = 0.0;
    for k in 1..n_max {
        logp += (0..k).map(|i| (pts[k] - pts[i]).norm().ln()).sum::<f64>();
        let n = (k + 1) as f64;
        sequence.push((k + 1, (2.0 * logp / (n * (n - 1.0))).exp()));
    }
    let delta = |n: usize| sequence[n - 2].1;
    let fit: Vec<(f64, f64)> = sequence
        .iter()
        .filter(|(n, _)| *n >= n_max / 2)
        .map(|&(n, d)| (n as f64, d.ln()))
        .collect();
    let a = nalgebra::DMatrix::from_fn(fit.len(), 2, |i, k| {
        let n = fit[i].0;
        if k == 0 {
            1.0
        } else {
            n.ln() / (n - 1.0)
        }
    });
    let b = nalgebra::DVector::from_iterator(fit.len(), fit.iter().map(|p| p.1));
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| FeketeError::InvalidArgument(e.to_string()))?;
    Ok(CapacityEstimate {
        extrapolated: sol[0].exp(),
        last: delta(n_max),
        uncertainty: (delta(n_max / 2) - delta(n_max)).abs(),
        sequence,
    })
}

/// Monic polynomial `Π (z − z_i)` over a configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeketePolynomial {
    roots: Vec<Point>,
}

impl FeketePolynomial {
    pub fn roots(&self) -> &[Point] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// `log|q(z)|`; `-∞` at a root.
    pub fn log_abs(&self, z: Point) -> f64 {
        self.roots.iter().map(|r| (z - r).norm().ln()).sum()
    }

    /// Direct product evaluation (may overflow for large degree).
    pub fn eval(&self, z: Point) -> Point {
        self.roots.iter().map(|r| z - r).product()
    }

    /// Monomial coefficients, ascending degree.
    pub fn coefficients(&self) -> Vec<Point> {
        let mut c = vec![Point::new(1.0, 0.0)];
        for r in &self.roots {
            let mut next = vec![Point::new(0.0, 0.0); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= ck * r;
            }
            c = next;
        }
        c
    }
}

pub fn fekete_polynomial(cfg: &PointConfiguration) -> FeketePolynomial {
    FeketePolynomial {
        roots: cfg.points().to_vec(),
    }
}

/// One degree of a [`DecayReport`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: usize,
    /// `log(‖q_n‖_L / inf_Δ |q_n|)`.
    pub log_ratio: f64,
    pub ratio: f64,
    pub ratio_root: f64,
    pub c_pow: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub c: f64,
    pub theta: f64,
    /// `c ≤ θ_{L,Δ}`.
    pub precondition_violated: bool,
    pub rows: Vec<DecayRow>,
    /// Smallest `n` from which `ratio_n < c^n` holds through the end of the range.
    pub first_persistent: Option<usize>,
}

impl DecayReport {
    /// Largest `ratio_n^{1/n}` over the second half of the range.
    pub fn tail_max_root(&self) -> f64 {
        let half = self.rows.len() / 2;
        self.rows[half..].iter().map(|r| r.ratio_root).fold(0.0, f64::max)
    }
}

/// `‖q_n‖_L / inf_Δ |q_n|`, `n ∈ [n_lo, n_hi]`, compared with `c^n`.
///
/// The roots of `q_n` are discrete Fekete points: the Leja sequence extended
/// one point per degree, each configuration refined by single-point moves
/// (see [`discrete_fekete_points`]).
///
/// Sup and inf are taken over boundary samples of the set and the curve nodes.
pub fn decay_check<G: GreenFunction + ?Sized>(
    green: &G,
    family: &CurveFamily,
    c: f64,
    n_range: (usize, usize),
) -> Result<DecayReport, FeketeError> {
    let (lo, hi) = n_range;
    if !(c > 0.0 && c < 1.0) {
        return Err(FeketeError::InvalidArgument(format!("c must lie in (0, 1), got {c}")));
    }
    if lo < 1 || lo > hi || hi > MAX_DECAY_DEGREE {
        return Err(FeketeError::InvalidArgument(format!(
            "degree range [{lo}, {hi}] must lie in [1, {MAX_DECAY_DEGREE}]"
        )));
    }
    let set = green.set();
    let theta = theta_for_family(green, family)?;
    let on_set = candidates(set);
    let on_curves: Vec<Point> = family.nodes().collect();
    // Grown from two points so that the rows do not depend on `n_lo`.
    let mut grid = grid_start(set, 2)?;
    let mut rows = Vec::new();
    for n in 2.min(lo)..=hi {
        if n > grid.chosen.len() {
            grid.push_greedy().ok_or(FeketeError::InsufficientCandidates {
                requested: n,
                available: on_set.len(),
            })?;
        }
        grid.refine(REFINE_SWEEPS);
        if n < lo {
            continue;
        }
        let roots = grid.points();
        let roots = &roots[..n];
        let log_q = |z: &Point| roots.iter().map(|r| (z - r).norm().ln()).sum::<f64>();
        let log_set: Vec<f64> = on_set.iter().map(log_q).collect();
        let log_curves: Vec<f64> = on_curves.iter().map(log_q).collect();
        let sup = log_set.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let inf = log_curves.iter().copied().fold(f64::INFINITY, f64::min);
        let log_ratio = sup - inf;
        let log_c = n as f64 * c.ln();
        rows.push(DecayRow {
            n,
            log_ratio,
            ratio: log_ratio.exp(),
            ratio_root: (log_ratio / n as f64).exp(),
            c_pow: log_c.exp(),
            holds: log_ratio < log_c,
        });
    }
    let first_persistent = rows
        .iter()
        .rposition(|r| !r.holds)
        .map_or(rows.first().map(|r| r.n), |i| rows.get(i + 1).map(|r| r.n));
    Ok(DecayReport {
        c,
        theta,
        precondition_violated: c <= theta,
        rows,
        first_persistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    fn unit_circle() -> CompactSet {
        CompactSet::new(vec![Component::disk(c(0.0, 0.0), 1.0).unwrap()]).unwrap()
    }

    fn segment() -> CompactSet {
        CompactSet::new(vec![Component::segment(c(-2.0, 0.0), c(2.0, 0.0)).unwrap()]).unwrap()
    }

    #[test]
    fn leja_on_segment_starts_with_endpoints() {
        let cfg = leja_points(&segment(), 2, None).unwrap();
        let mut xs: Vec<f64> = cfg.points().iter().map(|z| z.re).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs, vec![-2.0, 2.0]);
    }

    #[test]
    fn leja_on_circle() {
        let cfg = leja_points(&unit_circle(), 3, None).unwrap();
        // Greedy picks an antipodal pair and then a point at quarter turn.
        let p = cfg.points();
        assert!((p[0] + p[1]).norm() < 1e-12);
        assert!(((p[2] - p[0]).norm() - 2f64.sqrt()).abs() < 1e-12);

        let cfg = leja_points(&unit_circle(), 50, None).unwrap();
        let mut gap = f64::INFINITY;
        for i in 0..50 {
            for j in i + 1..50 {
                gap = gap.min((cfg.points()[i] - cfg.points()[j]).norm());
            }
        }
        assert!(gap > 0.4 * TAU / 50.0, "{gap}");
        assert!(cfg.distance_to(&unit_circle()) < 1e-9);
    }

    #[test]
    fn leja_product_grows_on_circle() {
        let cfg = leja_points(&unit_circle(), 40, None).unwrap();
        let mut last = f64::NEG_INFINITY;
        for n in 2..=40 {
            let v = log_product(&cfg.points()[..n]);
            assert!(v >= last - 1e-12);
            last = v;
        }
    }

    #[test]
    fn discrete_fekete_on_circle() {
        let cfg = discrete_fekete_points(&unit_circle(), 8, REFINE_SWEEPS).unwrap();
        assert_eq!(cfg.generator(), Generator::DiscreteFekete);
        assert!((nth_diameter(&cfg) - 8f64.powf(1.0 / 7.0)).abs() < 1e-12);
        let set = CompactSet::new(vec![
            Component::disk(c(0.0, 0.0), 1.0).unwrap(),
            Component::disk(c(2.5, 0.0), 0.25).unwrap(),
        ])
        .unwrap();
        let leja = leja_points(&set, 20, None).unwrap();
        let refined = discrete_fekete_points(&set, 20, REFINE_SWEEPS).unwrap();
        assert!(refined.log_product() >= leja.log_product());
        assert!(refined.distance_to(&set) < 1e-12);
    }

    #[test]
    fn too_many_points() {
        let set = CompactSet::new(vec![
            Component::point(c(0.0, 0.0)).unwrap(),
            Component::point(c(1.0, 0.0)).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            leja_points(&set, 3, None),
            Err(FeketeError::InsufficientCandidates { .. })
        ));
    }

    #[test]
    fn exact_small_fekete() {
        let two = fekete_points_small(&unit_circle(), 2, 3, 7).unwrap();
        assert!((nth_diameter(&two) - 2.0).abs() < 1e-12);
        let three = fekete_points_small(&unit_circle(), 3, 3, 7).unwrap();
        assert!((three.log_product().exp() - 27f64.sqrt()).abs() < 1e-9);
        assert!((nth_diameter(&three) - 27f64.sqrt().powf(1.0 / 3.0)).abs() < 1e-9);
        let seg = fekete_points_small(&segment(), 3, 3, 7).unwrap();
        let mut xs: Vec<f64> = seg.points().iter().map(|z| z.re).collect();
        xs.sort_by(f64::total_cmp);
        for (x, e) in xs.iter().zip([-2.0, 0.0, 2.0]) {
            assert!((x - e).abs() < 1e-6, "{xs:?}");
        }
    }

    #[test]
    fn exact_diameters_decrease() {
        let mut last = f64::INFINITY;
        for n in 2..=6 {
            let d = nth_diameter(&fekete_points_small(&unit_circle(), n, 2, 1).unwrap());
            assert!(d <= last + 1e-9, "n={n}: {d} > {last}");
            assert!(d <= 2.0 + 1e-12);
            last = d;
        }
    }

    #[test]
    fn capacity_of_disk_and_segment() {
        let disk = capacity_from_diameters(&unit_circle(), 64).unwrap();
        assert!((disk.extrapolated - 1.0).abs() < 0.05, "{disk:?}");
        let seg = capacity_from_diameters(&segment(), 64).unwrap();
        assert!((seg.extrapolated - 1.0).abs() < 0.1, "{}", seg.extrapolated);
        for w in disk.sequence.windows(2) {
            assert!(w[1].1 <= w[0].1 * 1.05);
        }
    }

    #[test]
    fn polynomial_from_roots() {
        let cfg = PointConfiguration::new(vec![c(-2.0, 0.0), c(2.0, 0.0)], Generator::Custom).unwrap();
        let q = fekete_polynomial(&cfg);
        assert_eq!(q.eval(c(0.0, 0.0)), c(-4.0, 0.0));
        assert_eq!(q.log_abs(c(2.0, 0.0)), f64::NEG_INFINITY);
        assert_eq!(q.coefficients(), vec![c(-4.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let big = fekete_polynomial(&leja_points(&unit_circle(), 20, None).unwrap());
        let z = c(1e3, 0.0);
        assert!((big.log_abs(z) - 20.0 * 1e3f64.ln()).abs() < 1e-3);
    }
}
