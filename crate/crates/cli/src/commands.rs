//! Per-command computation and file output.

use std::path::{Path, PathBuf};

use acf_core::approx::{dn_sequence, rho_from_dn, walsh_interpolant, DnSequence, RhoEstimate};
use acf_core::experiments::{gate_theorem, prop15_scenario, prop16_limit, Scenario};
use acf_core::fekete::{
    capacity_from_diameters, decay_check, discrete_fekete_points, leja_points, nth_diameter, DecayReport,
    PointConfiguration, REFINE_SWEEPS,
};
use acf_core::geometry::{lower_bound, offset_curve_family, CompactSet, CurveFamily};
use acf_core::potential::{
    capacity, find_saddles, fit_greens, level_curve_family, rho_critical, theta_descent, theta_for_family,
    GreensModel, PotentialError, SaddlePoint, ThetaStep,
};
use acf_core::Point;
use serde::Serialize;

use crate::manifest::{input_record, Manifest};
use crate::report::{GateRow, GATE_FILE};
use crate::svg::{Plot, Series};
use crate::{parallel_map, CliError, Command, LoadedScenario, RunConfig, RunOutcome};

const ATLAS_FRACTIONS: [f64; 4] = [0.25, 0.5, 0.75, 0.95];
const DESCENT_STEPS: usize = 6;

/// Collects the files of one command directory.
struct Out<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Out<'_> {
    fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        acf_core::io::write_csv(&path, rows).map_err(|e| CliError::write(&path, e))?;
        self.files.push(PathBuf::from(name));
        Ok(())
    }

    fn svg(&mut self, name: &str, plot: &Plot) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, plot.render()).map_err(|e| CliError::write(&path, e))?;
        self.files.push(PathBuf::from(name));
        Ok(())
    }
}

pub(crate) fn execute(config: &RunConfig, scenarios: &[LoadedScenario], dir: &Path) -> Result<RunOutcome, CliError> {
    let mut out = Out { dir, files: Vec::new() };
    let mut warnings = Vec::new();
    let list: Vec<&Scenario> = scenarios.iter().map(|l| &l.scenario).collect();
    let jobs = config.jobs;
    let passed = match &config.command {
        Command::Bound => bound(&list, jobs, &mut out)?,
        Command::Green => green(&list, jobs, &mut out, &mut warnings)?,
        Command::Rho => rho(&list, jobs, &mut out)?,
        Command::Fekete => fekete(&list, jobs, &mut out, &mut warnings)?,
        Command::Approx => approx(&list, jobs, &mut out)?,
        Command::Prop15 { h0, delta0 } => prop15(*h0, *delta0, &mut out)?,
        Command::Prop16 { h0, steps } => prop16(*h0, *steps, &mut out)?,
        Command::Gate => gate(&list, jobs, &mut out)?,
        Command::Report { .. } => unreachable!("handled by run"),
    };
    for w in &warnings {
        log::warn!("{w}");
    }
    let inputs = scenarios.iter().map(input_record).collect::<Result<Vec<_>, _>>()?;
    Manifest::new(config.command.name(), parameters(config), inputs).finish(dir, &out.files, passed)?;
    Ok(RunOutcome {
        files: out.files,
        dir: dir.to_path_buf(),
        passed,
        warnings,
    })
}

fn parameters(config: &RunConfig) -> toml::Table {
    use toml::Value;
    let mut t = toml::Table::new();
    let int = |x: usize| Value::Integer(x as i64);
    t.insert("jobs".into(), int(config.jobs));
    t.insert(
        "scenarios".into(),
        Value::Array(config.scenarios.iter().map(|s| Value::String(s.clone())).collect()),
    );
    let o = &config.overrides;
    if let Some(d) = o.degree_max {
        t.insert("degree_max".into(), int(d));
    }
    if let Some(m) = o.margin {
        t.insert("margin".into(), Value::Float(m));
    }
    if let Some(d) = o.density {
        t.insert("density".into(), Value::Float(d));
    }
    if let Some((lo, hi)) = o.window {
        t.insert("window".into(), Value::Array(vec![int(lo), int(hi)]));
    }
    if let Some(s) = o.seed {
        t.insert("seed".into(), Value::Integer(s as i64));
    }
    match config.command {
        Command::Prop15 { h0, delta0 } => {
            t.insert("h0".into(), Value::Float(h0));
            t.insert("delta0".into(), Value::Float(delta0));
        }
        Command::Prop16 { h0, steps } => {
            t.insert("h0".into(), Value::Float(h0));
            t.insert("steps".into(), int(steps));
        }
        _ => {}
    }
    t
}

/// First error in scenario order, otherwise all results.
fn collect<R>(results: Vec<Result<R, CliError>>) -> Result<Vec<R>, CliError> {
    results.into_iter().collect()
}

fn xy(p: Point) -> (f64, f64) {
    (p.re, p.im)
}

/// Boundary of each component: closed outlines for fat components, markers
/// for points, open lines for segments.
fn set_series(set: &CompactSet) -> Vec<Series> {
    let samples = set.sample_boundary(16.0);
    (0..set.len())
        .map(|j| {
            let pts: Vec<(f64, f64)> = samples.iter().filter(|s| s.0 == j).map(|s| xy(s.1)).collect();
            let s = Series::line(format!("K{j}"), pts);
            if set.component(j).has_interior() {
                s.closed()
            } else if s.points.len() == 1 {
                s.scatter()
            } else {
                s
            }
        })
        .collect()
}

fn family_series(family: &CurveFamily, label: &str) -> Vec<Series> {
    family
        .curves()
        .iter()
        .enumerate()
        .map(|(j, c)| Series::line(format!("{label} {j}"), c.nodes().iter().map(|&p| xy(p)).collect()).closed().dashed())
        .collect()
}

fn file_name(prefix: &str, scenario: &str, ext: &str) -> String {
    let safe: String = scenario
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect();
    format!("{prefix}_{safe}.{ext}")
}

// ---- bound ----

#[derive(Serialize)]
struct BoundRow {
    scenario: String,
    lower_bound: f64,
    component: usize,
    argmax_re: f64,
    argmax_im: f64,
}

fn bound(list: &[&Scenario], jobs: usize, out: &mut Out) -> Result<bool, CliError> {
    let rows = collect(parallel_map(list, jobs, |s| {
        let b = lower_bound(&s.set)?;
        Ok(BoundRow {
            scenario: s.name.clone(),
            lower_bound: b.value,
            component: b.component,
            argmax_re: b.argmax.re,
            argmax_im: b.argmax.im,
        })
    }))?;
    out.csv("bound.csv", &rows)?;
    Ok(true)
}

// ---- green ----

#[derive(Serialize)]
struct GreenRow {
    scenario: String,
    capacity: f64,
    robin_constant: f64,
    collocation_residual: f64,
    charges: usize,
    rho_critical: Option<f64>,
    g_critical: Option<f64>,
    theta_offset_family: f64,
    curve_margin: f64,
}

#[derive(Serialize)]
struct SaddleRow {
    re: f64,
    im: f64,
    g_value: f64,
    gradient_norm: f64,
    signature: String,
}

struct GreenResult {
    model: GreensModel,
    row: GreenRow,
    saddles: Vec<SaddlePoint>,
    descent: Vec<ThetaStep>,
    family: CurveFamily,
    levels: Vec<(f64, CurveFamily)>,
    warnings: Vec<String>,
}

fn green_one(s: &Scenario) -> Result<GreenResult, CliError> {
    let model = fit_greens(&s.set, &s.greens_params)?;
    let family = offset_curve_family(&s.set, s.curve_margin)?;
    let theta = theta_for_family(&model, &family)?;
    let mut warnings = Vec::new();
    let critical = match rho_critical(&model) {
        Ok(c) => Some(c),
        Err(e @ (PotentialError::NoSaddle | PotentialError::MergedLevelSet { .. })) => {
            warnings.push(format!("{}: no critical potential ({e})", s.name));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let mut descent = Vec::new();
    let mut levels = Vec::new();
    if let Some(c) = &critical {
        descent = theta_descent(&model, DESCENT_STEPS)?;
        for f in ATLAS_FRACTIONS {
            match level_curve_family(&model, f * c.g_c) {
                Ok(fam) => levels.push((f, fam)),
                Err(e) => warnings.push(format!("{}: level {f}·g_c not drawn ({e})", s.name)),
            }
        }
    }
    Ok(GreenResult {
        row: GreenRow {
            scenario: s.name.clone(),
            capacity: capacity(&model),
            robin_constant: model.robin_constant + 0.0,
            collocation_residual: model.collocation_residual,
            charges: model.charge_points.len(),
            rho_critical: critical.as_ref().map(|c| c.rho),
            g_critical: critical.as_ref().map(|c| c.g_c),
            theta_offset_family: theta,
            curve_margin: s.curve_margin,
        },
        saddles: find_saddles(&model),
        model,
        descent,
        family,
        levels,
        warnings,
    })
}

fn green(list: &[&Scenario], jobs: usize, out: &mut Out, warnings: &mut Vec<String>) -> Result<bool, CliError> {
    let results = collect(parallel_map(list, jobs, |s| green_one(s)))?;
    for r in &results {
        let name = &r.row.scenario;
        warnings.extend(r.warnings.iter().cloned());
        let saddles: Vec<SaddleRow> = r
            .saddles
            .iter()
            .map(|p| SaddleRow {
                re: p.location.re,
                im: p.location.im,
                g_value: p.g_value,
                gradient_norm: p.gradient_norm,
                signature: format!("{:?}", p.hessian_signature).to_lowercase(),
            })
            .collect();
        out.csv(&file_name("saddles", name, "csv"), &saddles)?;
        out.csv(&file_name("theta_descent", name, "csv"), &r.descent)?;

        let set = &r.model.source_set;
        let mut atlas = Plot::plane(format!("{name}: level curves of g"));
        for s in set_series(set) {
            atlas.push(s);
        }
        for (f, fam) in &r.levels {
            for (j, c) in fam.curves().iter().enumerate() {
                let label = if j == 0 { format!("g = {f}·g_c") } else { String::new() };
                atlas.push(Series::line(label, c.nodes().iter().map(|&p| xy(p)).collect()).closed());
            }
        }
        if !r.saddles.is_empty() {
            atlas.push(Series::line("saddles", r.saddles.iter().map(|p| xy(p.location)).collect()).scatter());
        }
        out.svg(&file_name("atlas", name, "svg"), &atlas)?;

        let mut overlay = Plot::plane(format!("{name}: offset curves, margin {}", r.row.curve_margin));
        for s in set_series(set) {
            overlay.push(s);
        }
        for s in family_series(&r.family, "Δ") {
            overlay.push(s);
        }
        out.svg(&file_name("family", name, "svg"), &overlay)?;

        if !r.descent.is_empty() {
            let mut p = Plot::new(format!("{name}: θ on level-curve families"), "level", "θ");
            p.push(Series::line("θ", r.descent.iter().map(|s| (s.level, s.theta)).collect()).markers());
            if let Some(rc) = r.row.rho_critical {
                let g = r.row.g_critical.unwrap_or(0.0);
                p.push(Series::line("ρ critical", vec![(0.0, rc), (g, rc)]).dashed());
            }
            out.svg(&file_name("theta_descent", name, "svg"), &p)?;
        }
    }
    let rows: Vec<&GreenRow> = results.iter().map(|r| &r.row).collect();
    out.csv("green.csv", &rows)?;
    Ok(true)
}

// ---- rho ----

#[derive(Serialize)]
struct RhoRow {
    scenario: String,
    function: usize,
    rho: f64,
    window_lo: usize,
    window_hi: usize,
    tail_max: Option<f64>,
    lower_bound: f64,
}

#[derive(Serialize)]
struct DnRowOut {
    function: usize,
    n: usize,
    d_n: f64,
    root: f64,
    raw: f64,
    lower_bound: f64,
    iterations: usize,
    converged: bool,
}

fn dn_rows(seqs: &[DnSequence]) -> Vec<DnRowOut> {
    seqs.iter()
        .enumerate()
        .flat_map(|(i, seq)| {
            seq.rows.iter().map(move |r| DnRowOut {
                function: i,
                n: r.n,
                d_n: r.d_n,
                root: r.root(),
                raw: r.raw,
                lower_bound: r.lower_bound,
                iterations: r.iterations,
                converged: r.converged,
            })
        })
        .collect()
}

/// `log10 d_n` against `n`, with the fitted slope line over the window.
fn dn_plot(name: &str, seqs: &[DnSequence], estimates: &[RhoEstimate]) -> Plot {
    let mut p = Plot::new(format!("{name}: minimax errors"), "n", "log10 d_n");
    for (i, (seq, est)) in seqs.iter().zip(estimates).enumerate() {
        let pts: Vec<(f64, f64)> = seq.rows.iter().filter(|r| r.d_n > 0.0).map(|r| (r.n as f64, r.d_n.log10())).collect();
        p.push(Series::line(format!("F{i}"), pts).markers());
        if let Some((lo, hi)) = est.window {
            let win: Vec<(f64, f64)> = seq.rows[lo..=hi].iter().map(|r| (r.n as f64, r.d_n.log10())).collect();
            let slope = est.value.log10();
            let mean_n = win.iter().map(|w| w.0).sum::<f64>() / win.len() as f64;
            let mean_y = win.iter().map(|w| w.1).sum::<f64>() / win.len() as f64;
            let line = |n: f64| mean_y + slope * (n - mean_n);
            p.push(
                Series::line(format!("F{i} fit ρ = {:.4}", est.value), vec![(lo as f64, line(lo as f64)), (hi as f64, line(hi as f64))])
                    .dashed(),
            );
        }
    }
    p
}

fn rho(list: &[&Scenario], jobs: usize, out: &mut Out) -> Result<bool, CliError> {
    let results = collect(parallel_map(list, jobs, |s| {
        let lb = lower_bound(&s.set)?.value;
        let mut seqs = Vec::new();
        let mut ests = Vec::new();
        for f in &s.functions {
            let seq = dn_sequence(f, &s.set, s.degree_max, s.density)?;
            ests.push(rho_from_dn(&seq.values(), seq.f_norm, s.window)?);
            seqs.push(seq);
        }
        Ok((*s, lb, seqs, ests))
    }))?;
    let mut rows = Vec::new();
    for (s, lb, seqs, ests) in &results {
        for (i, e) in ests.iter().enumerate() {
            rows.push(RhoRow {
                scenario: s.name.clone(),
                function: i,
                rho: e.value,
                window_lo: s.window.0,
                window_hi: s.window.1,
                tail_max: e.tail_max,
                lower_bound: *lb,
            });
        }
        out.csv(&file_name("dn", &s.name, "csv"), &dn_rows(seqs))?;
        out.svg(&file_name("dn", &s.name, "svg"), &dn_plot(&s.name, seqs, ests))?;
    }
    out.csv("rho.csv", &rows)?;
    Ok(true)
}

// ---- fekete ----

#[derive(Serialize)]
struct FeketeRow {
    scenario: String,
    n: usize,
    delta_n_leja: f64,
    delta_n_refined: f64,
    capacity_extrapolated: f64,
    capacity_last: f64,
    capacity_uncertainty: f64,
    capacity_green: Option<f64>,
    theta: Option<f64>,
    c: Option<f64>,
    decay_first_persistent: Option<usize>,
}

#[derive(Serialize)]
struct PointRow {
    index: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct DecayRowOut {
    n: usize,
    ratio: f64,
    ratio_root: f64,
    c_pow: f64,
    holds: bool,
}

struct FeketeResult {
    row: FeketeRow,
    leja: PointConfiguration,
    refined: PointConfiguration,
    decay: Option<DecayReport>,
    warnings: Vec<String>,
}

fn fekete_one(s: &Scenario) -> Result<FeketeResult, CliError> {
    let n = s.degree_max.max(2);
    let leja = leja_points(&s.set, n, None)?;
    let refined = discrete_fekete_points(&s.set, n, REFINE_SWEEPS)?;
    let cap = capacity_from_diameters(&s.set, n)?;
    let mut warnings = Vec::new();
    let (model, decay) = match fit_greens(&s.set, &s.greens_params) {
        Ok(model) => {
            let family = offset_curve_family(&s.set, s.curve_margin)?;
            let theta = theta_for_family(&model, &family)?;
            let c = (theta + 0.1).min(0.999);
            let lo = s.window.0.clamp(1, n);
            let report = decay_check(&model, &family, c, (lo, n))?;
            (Some(model), Some(report))
        }
        Err(PotentialError::NoFatComponent) => {
            warnings.push(format!("{}: no Green's function, decay check skipped", s.name));
            (None, None)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(FeketeResult {
        row: FeketeRow {
            scenario: s.name.clone(),
            n,
            delta_n_leja: nth_diameter(&leja),
            delta_n_refined: nth_diameter(&refined),
            capacity_extrapolated: cap.extrapolated,
            capacity_last: cap.last,
            capacity_uncertainty: cap.uncertainty,
            capacity_green: model.as_ref().map(capacity),
            theta: decay.as_ref().map(|d| d.theta),
            c: decay.as_ref().map(|d| d.c),
            decay_first_persistent: decay.as_ref().and_then(|d| d.first_persistent),
        },
        leja,
        refined,
        decay,
        warnings,
    })
}

fn point_rows(cfg: &PointConfiguration) -> Vec<PointRow> {
    cfg.points()
        .iter()
        .enumerate()
        .map(|(index, p)| PointRow { index, re: p.re, im: p.im })
        .collect()
}

fn fekete(list: &[&Scenario], jobs: usize, out: &mut Out, warnings: &mut Vec<String>) -> Result<bool, CliError> {
    let results = collect(parallel_map(list, jobs, |s| fekete_one(s)))?;
    for (r, s) in results.iter().zip(list) {
        let name = &r.row.scenario;
        warnings.extend(r.warnings.iter().cloned());
        out.csv(&file_name("leja", name, "csv"), &point_rows(&r.leja))?;
        out.csv(&file_name("fekete", name, "csv"), &point_rows(&r.refined))?;
        if let Some(d) = &r.decay {
            let rows: Vec<DecayRowOut> = d
                .rows
                .iter()
                .map(|x| DecayRowOut {
                    n: x.n,
                    ratio: x.ratio,
                    ratio_root: x.ratio_root,
                    c_pow: x.c_pow,
                    holds: x.holds,
                })
                .collect();
            out.csv(&file_name("decay", name, "csv"), &rows)?;
        }
        let mut p = Plot::plane(format!("{name}: {} points", r.row.n));
        for series in set_series(&s.set) {
            p.push(series);
        }
        p.push(Series::line("Leja", r.leja.points().iter().map(|&z| xy(z)).collect()).scatter());
        p.push(Series::line("refined", r.refined.points().iter().map(|&z| xy(z)).collect()).scatter());
        out.svg(&file_name("points", name, "svg"), &p)?;
    }
    let rows: Vec<&FeketeRow> = results.iter().map(|r| &r.row).collect();
    out.csv("fekete.csv", &rows)?;
    Ok(true)
}

// ---- approx ----

#[derive(Serialize)]
struct WalshRowOut {
    m: usize,
    measured_error: f64,
    bound: f64,
    bound_a: f64,
    rate: f64,
    holds: bool,
    contour_disagreement: f64,
}

#[derive(Serialize)]
struct ApproxRow {
    scenario: String,
    m_max: usize,
    all_hold: bool,
    rate_at_m_max: f64,
    rate_fit: Option<f64>,
}

fn approx(list: &[&Scenario], jobs: usize, out: &mut Out) -> Result<bool, CliError> {
    let results = collect(parallel_map(list, jobs, |s| {
        let family = offset_curve_family(&s.set, s.curve_margin)?;
        let m_max = s.degree_max.max(2);
        let rows = (2..=m_max)
            .map(|m| {
                let r = walsh_interpolant(&s.functions[0], &s.set, &family, m)?;
                Ok(WalshRowOut {
                    m,
                    measured_error: r.measured_error,
                    bound: r.bound,
                    bound_a: r.bound_a,
                    rate: r.measured_error.powf(1.0 / m as f64),
                    holds: r.bound_holds,
                    contour_disagreement: r.contour_disagreement,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok((*s, m_max, rows))
    }))?;
    let mut summary = Vec::new();
    for (s, m_max, rows) in &results {
        // Slope of log error over the scenario window, indexed by m.
        let errors: Vec<f64> = [f64::NAN, f64::NAN].into_iter().chain(rows.iter().map(|r| r.measured_error)).collect();
        let scale = rows.iter().map(|r| r.measured_error).fold(0.0, f64::max);
        let rate_fit = (s.window.0 >= 2 && s.window.1 <= *m_max)
            .then(|| rho_from_dn(&errors, scale, s.window).ok().map(|e| e.value))
            .flatten();
        summary.push(ApproxRow {
            scenario: s.name.clone(),
            m_max: *m_max,
            all_hold: rows.iter().all(|r| r.holds),
            rate_at_m_max: rows.last().map_or(f64::NAN, |r| r.rate),
            rate_fit,
        });
        out.csv(&file_name("walsh", &s.name, "csv"), rows)?;
        let mut p = Plot::new(format!("{}: interpolation error and bound", s.name), "m", "log10");
        p.push(Series::line("‖F − r_m‖", rows.iter().map(|r| (r.m as f64, r.measured_error.log10())).collect()).markers());
        p.push(Series::line("bound", rows.iter().map(|r| (r.m as f64, r.bound.log10())).collect()).dashed());
        out.svg(&file_name("walsh", &s.name, "svg"), &p)?;
    }
    out.csv("approx.csv", &summary)?;
    Ok(summary.iter().all(|r| r.all_hold))
}

// ---- prop15 / prop16 ----

#[derive(Serialize)]
struct Prop15Summary {
    h0: f64,
    delta0: f64,
    ell0: f64,
    r0: f64,
    big_n0: usize,
    eps0: f64,
    n0: usize,
    degree: usize,
    final_value: f64,
    target: f64,
    pass: bool,
}

fn prop15(h0: f64, delta0: f64, out: &mut Out) -> Result<bool, CliError> {
    let r = prop15_scenario(h0, delta0)?;
    let p = r.params;
    out.csv(
        "prop15.csv",
        &[Prop15Summary {
            h0: p.h0,
            delta0: p.delta0,
            ell0: p.ell0,
            r0: p.r0,
            big_n0: p.big_n0,
            eps0: p.eps0,
            n0: p.n0,
            degree: r.degree,
            final_value: r.final_value,
            target: r.target,
            pass: r.pass,
        }],
    )?;
    out.csv("prop15_checks.csv", &r.checks)?;
    Ok(r.pass)
}

fn prop16(h0: f64, steps: usize, out: &mut Out) -> Result<bool, CliError> {
    let rows = prop16_limit(h0, steps)?;
    out.csv("prop16.csv", &rows)?;
    let mut p = Plot::new(format!("θ for shrinking disks, h0 = {h0}"), "k", "θ");
    p.push(Series::line("θ (curves)", rows.iter().map(|r| (r.k as f64, r.theta)).collect()).markers());
    p.push(Series::line("analytic", rows.iter().map(|r| (r.k as f64, r.analytic)).collect()).dashed());
    if let (Some(a), Some(b)) = (rows.first(), rows.last()) {
        p.push(Series::line("1/h0", vec![(a.k as f64, 1.0 / h0), (b.k as f64, 1.0 / h0)]).dashed());
    }
    out.svg("prop16.svg", &p)?;
    let decreasing = rows.windows(2).all(|w| w[1].theta < w[0].theta);
    let above = rows.iter().all(|r| r.theta >= 1.0 / h0);
    Ok(decreasing && above)
}

// ---- gate ----

fn gate(list: &[&Scenario], jobs: usize, out: &mut Out) -> Result<bool, CliError> {
    let reports = collect(parallel_map(list, jobs, |s| gate_theorem(s).map_err(CliError::from)))?;
    let mut rows = Vec::new();
    for r in &reports {
        let first = &r.rho_dn[0];
        let min = r.rho_dn.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
        rows.push(GateRow {
            scenario: r.scenario.clone(),
            lower_bound: r.lower_bound,
            rho_critical: r.rho_critical,
            rho_minimax: first.value,
            rho_minimax_min: min,
            f_spread: r.f_spread,
            tail_max: first.tail_max,
            gap_minimax: min - r.lower_bound,
            gap_critical: r.rho_critical.map(|c| c - r.lower_bound),
            independent: r.independent,
            pass: r.pass,
        });
        for v in &r.violations {
            log::error!("{}: {v}", r.scenario);
        }
        out.csv(&file_name("dn", &r.scenario, "csv"), &dn_rows(&r.sequences))?;
        out.svg(&file_name("dn", &r.scenario, "svg"), &dn_plot(&r.scenario, &r.sequences, &r.rho_dn))?;
    }
    out.csv(GATE_FILE, &rows)?;
    Ok(rows.iter().all(|r| r.pass))
}
