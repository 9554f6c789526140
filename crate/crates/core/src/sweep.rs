//! Three-body coefficients across planar triangle orientations.
//!
//! Atoms sit at `A = 0`, `B = (b, 0, 0)` and `C = (cos t, sin t, 0)`, so the
//! A-C distance is the unit of length. Rows are reported in units of
//! `alpha1 alpha2 alpha3 / (pi (4 pi)^3 c^10)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::green_tensor::three_body_total_general;
use crate::quadrature::QuadratureSpec;
use crate::system::{AtomSystem, CoefficientResult};
use crate::worldline::scalar_sum_fixed_base;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMethod {
    /// Worldline TE + TM with the base point fixed on one atom.
    WorldlineSum,
    /// Position-space Green-tensor total.
    GreenTensor,
}

impl SweepMethod {
    pub const ALL: [SweepMethod; 2] = [SweepMethod::WorldlineSum, SweepMethod::GreenTensor];

    pub fn as_str(&self) -> &'static str {
        match self {
            SweepMethod::WorldlineSum => "worldline_sum",
            SweepMethod::GreenTensor => "green_tensor",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub b_over_c: f64,
    pub cos_theta: Vec<f64>,
    pub methods: Vec<SweepMethod>,
    pub worldline_spec: QuadratureSpec,
    pub green_spec: QuadratureSpec,
    /// Grid points closer than this (in `cos t`) to a coincident-atom
    /// geometry are not evaluated.
    pub exclusion_radius: f64,
}

pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-3;

/// `n` uniform points on `[-1, 1]`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| (2.0 * i as f64 - (n - 1) as f64) / (n - 1) as f64).collect(),
    }
}

impl SweepConfig {
    /// Both methods on an `n`-point uniform grid with default rules.
    pub fn new(b_over_c: f64, n: usize) -> Self {
        Self {
            b_over_c,
            cos_theta: uniform_grid(n),
            methods: SweepMethod::ALL.to_vec(),
            worldline_spec: crate::worldline::coefficient::default_spec(),
            green_spec: crate::green_tensor::position::default_spec(),
            exclusion_radius: DEFAULT_EXCLUSION_RADIUS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b_over_c > 0.0 && self.b_over_c.is_finite()) {
            return Err(CasimirError::InvalidParameter(format!("b/c must be positive, got {}", self.b_over_c)));
        }
        if let Some(c) = self.cos_theta.iter().find(|c| !(c.abs() <= 1.0)) {
            return Err(CasimirError::InvalidParameter(format!("cos(theta) = {c} outside [-1, 1]")));
        }
        if self.methods.is_empty() {
            return Err(CasimirError::InvalidParameter("sweep needs at least one method".into()));
        }
        Ok(())
    }

    /// Whether `cos_theta` lies within the exclusion radius of the only
    /// degenerate orientation, `B = C` (`b/c = 1`, `cos t = 1`).
    pub fn is_excluded(&self, cos_theta: f64) -> bool {
        (self.b_over_c - 1.0).abs() < self.exclusion_radius && 1.0 - cos_theta < self.exclusion_radius
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub cos_theta: f64,
    pub b_over_c: f64,
    pub method: SweepMethod,
    /// NaN when the point failed or was excluded; see `failure`.
    pub value: f64,
    pub error_estimate: f64,
    pub failure: Option<String>,
    /// Skipped as too close to a degenerate geometry rather than failed.
    pub excluded: bool,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn build_geometry(b_over_c: f64, cos_theta: f64) -> Result<AtomSystem> {
    if !(cos_theta.abs() <= 1.0) {
        return Err(CasimirError::InvalidParameter(format!("cos(theta) = {cos_theta} outside [-1, 1]")));
    }
    if !(b_over_c > 0.0 && b_over_c.is_finite()) {
        return Err(CasimirError::InvalidParameter(format!("b/c must be positive, got {b_over_c}")));
    }
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    AtomSystem::unit(vec![[0.0; 3], [b_over_c, 0.0, 0.0], [cos_theta, sin_theta, 0.0]])
}

/// Coefficient of `method` at one geometry, converted from units of the
/// largest separation to units of `c = 1`.
pub fn evaluate_point(config: &SweepConfig, method: SweepMethod, cos_theta: f64) -> Result<CoefficientResult> {
    let system = build_geometry(config.b_over_c, cos_theta)?;
    let mut r = match method {
        SweepMethod::WorldlineSum => scalar_sum_fixed_base(&system, &config.worldline_spec)?,
        SweepMethod::GreenTensor => three_body_total_general(&system, &config.green_spec)?,
    };
    let rescale = system.reference_separation().powi(-10);
    r.value *= rescale;
    r.error_estimate *= rescale;
    Ok(r)
}

/// Every (grid point, method) pair in grid order; failures become rows with
/// a message instead of aborting the sweep.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let jobs: Vec<(f64, SweepMethod)> = config
        .cos_theta
        .iter()
        .flat_map(|&c| config.methods.iter().map(move |&m| (c, m)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|&(cos_theta, method)| {
            let excluded = config.is_excluded(cos_theta);
            let outcome = if excluded {
                Err(CasimirError::InvalidGeometry(format!(
                    "within {} of the coincident-atom orientation",
                    config.exclusion_radius
                )))
            } else {
                evaluate_point(config, method, cos_theta)
            };
            let (value, error_estimate, failure) = match outcome {
                Ok(r) => (r.value, r.error_estimate, None),
                Err(e) => {
                    let best = e.best_estimate().map(|b| (b.value, b.error_estimate));
                    let (v, err) = best.unwrap_or((f64::NAN, f64::NAN));
                    (v, err, Some(e.to_string()))
                }
            };
            SweepRow {
                cos_theta,
                b_over_c: config.b_over_c,
                method,
                value,
                error_estimate,
                failure,
                excluded,
            }
        })
        .collect())
}

/// Grid positions where `method`'s curve flips sign with a jump more than
/// `factor` times larger than both neighbouring jumps. Meant for flagging
/// suspicious points, not for asserting smoothness.
pub fn flag_jumps(rows: &[SweepRow], method: SweepMethod, factor: f64) -> Vec<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.method == method && r.is_ok())
        .map(|r| (r.cos_theta, r.value))
        .collect();
    let jumps: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
    (0..jumps.len())
        .filter(|&i| {
            let flips = pts[i].1.signum() != pts[i + 1].1.signum();
            let before = if i > 0 { jumps[i - 1] } else { 0.0 };
            let after = jumps.get(i + 1).copied().unwrap_or(0.0);
            flips && jumps[i] > factor * before.max(after) && (i > 0 || i + 1 < jumps.len())
        })
        .map(|i| pts[i].0)
        .collect()
}
