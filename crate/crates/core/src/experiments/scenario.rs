use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::approx::{PiecewisePolynomial, DEFAULT_DENSITY, MAX_DEGREE};
use crate::geometry::{offset_curve_family, validate_curve_family, CompactSet, Component};
use crate::potential::GreensParams;
use crate::Point;

/// A named compact set with target functions and run settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub set: CompactSet,
    /// Target functions; the first drives single-function runs, the others are
    /// compared against it.
    pub functions: Vec<PiecewisePolynomial>,
    pub degree_max: usize,
    /// Degree window of the slope fit.
    pub window: (usize, usize),
    pub density: f64,
    pub greens_params: GreensParams,
    pub curve_margin: f64,
    pub seed: u64,
}

impl Scenario {
    /// Checks every field against the set and the other fields.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::InvalidScenario {
            name: self.name.clone(),
            reason: msg,
        });
        if self.name.is_empty() {
            return bad("empty name".into());
        }
        if self.functions.is_empty() {
            return bad("no target function".into());
        }
        for f in &self.functions {
            if let Err(e) = f.check_against(&self.set) {
                return bad(e.to_string());
            }
        }
        if self.degree_max > MAX_DEGREE {
            return bad(format!("degree_max {} exceeds {MAX_DEGREE}", self.degree_max));
        }
        let (lo, hi) = self.window;
        if lo >= hi || hi > self.degree_max {
            return bad(format!("window [{lo}, {hi}] not inside 0..={}", self.degree_max));
        }
        if !(self.density >= 16.0) {
            return bad(format!("density {} below 16", self.density));
        }
        match offset_curve_family(&self.set, self.curve_margin) {
            Ok(family) if validate_curve_family(&self.set, &family).passed => Ok(()),
            Ok(_) => bad("default curve family is not admissible".into()),
            Err(e) => bad(e.to_string()),
        }
    }
}

fn c(re: f64, im: f64) -> Point {
    Point::new(re, im)
}

fn real(pieces: &[&[f64]]) -> PiecewisePolynomial {
    PiecewisePolynomial::from_real(pieces).expect("library pieces are distinct")
}

fn scenario(
    name: &str,
    components: Vec<Component>,
    functions: Vec<PiecewisePolynomial>,
    degree_max: usize,
    window: (usize, usize),
    curve_margin: f64,
) -> Scenario {
    Scenario {
        name: name.to_string(),
        set: CompactSet::new(components).expect("library sets are valid"),
        functions,
        degree_max,
        window,
        density: DEFAULT_DENSITY,
        greens_params: GreensParams::default(),
        curve_margin,
        seed: 1,
    }
}

/// The built-in scenarios.
pub fn scenario_library() -> Vec<Scenario> {
    let disk = |x: f64, y: f64, r: f64| Component::disk(c(x, y), r).expect("valid disk");
    let three: Vec<Component> = (0..3)
        .map(|k| {
            let p = Point::from_polar(3.0, TAU * k as f64 / 3.0);
            disk(p.re, p.im, 1.0)
        })
        .collect();
    vec![
        scenario(
            "disk_point",
            vec![disk(0.0, 0.0, 1.0), Component::point(c(2.0, 0.0)).expect("valid point")],
            vec![real(&[&[0.0], &[1.0]]), real(&[&[0.0, 1.0], &[1.0, 0.0, 1.0]])],
            40,
            (15, 35),
            0.3,
        ),
        scenario(
            "disk_tiny_disk",
            vec![disk(0.0, 0.0, 1.0), disk(2.001, 0.0, 0.001)],
            vec![real(&[&[0.0], &[1.0]]), real(&[&[0.0, 1.0], &[1.0, 0.0, 1.0]])],
            40,
            (15, 35),
            0.3,
        ),
        scenario(
            "two_equal_disks",
            vec![disk(0.0, 0.0, 1.0), disk(4.0, 0.0, 1.0)],
            vec![real(&[&[0.0], &[1.0]]), real(&[&[0.0, 1.0], &[1.0, 0.0, 1.0]])],
            40,
            (15, 35),
            0.5,
        ),
        scenario(
            "two_unequal_disks",
            vec![disk(0.0, 0.0, 1.0), disk(3.5, 0.0, 0.5)],
            vec![real(&[&[0.0], &[1.0]]), real(&[&[0.0, 1.0], &[1.0, 0.0, 1.0]])],
            40,
            (15, 35),
            0.5,
        ),
        scenario(
            "three_symmetric_disks",
            three,
            vec![
                real(&[&[0.0], &[1.0], &[2.0]]),
                real(&[&[0.0, 1.0], &[1.0], &[0.0, 0.0, 1.0]]),
            ],
            40,
            (15, 35),
            0.5,
        ),
        scenario(
            "square_disk",
            vec![
                Component::rectangle(0.0, 0.0, 1.0, 1.0).expect("valid square"),
                disk(4.0, 0.0, 1.0),
            ],
            vec![real(&[&[0.0], &[1.0]]), real(&[&[0.0, 1.0], &[1.0, 0.0, 1.0]])],
            40,
            (15, 35),
            0.5,
        ),
    ]
}

/// A library scenario by name.
pub fn library_scenario(name: &str) -> Option<Scenario> {
    scenario_library().into_iter().find(|s| s.name == name)
}
