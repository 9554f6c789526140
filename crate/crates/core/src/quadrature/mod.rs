//! Deterministic tensor-product quadrature over semi-infinite and bounded
//! boxes, with successive-refinement error estimates.
//!
//! All reductions run in a fixed order (per-slice sequential sums followed by
//! a pairwise sum over slices), so a given [`QuadratureSpec`] produces
//! bit-identical results regardless of the thread count.

mod rules;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};

pub use rules::{gauss_legendre_unit, Rule1d};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisRule {
    /// `x = -ln(1 - t)` on semi-infinite axes, tanh-sinh in `t`.
    ExpTransform,
    /// exp-sinh on semi-infinite axes, tanh-sinh on bounded ones.
    DoubleExponential,
    /// Gauss-Legendre, with `x = tan(pi t / 2)` on semi-infinite axes.
    GaussLegendreMapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub rule: AxisRule,
    /// Node count at refinement level 0.
    pub nodes: usize,
}

impl AxisSpec {
    pub const fn new(rule: AxisRule, nodes: usize) -> Self {
        Self { rule, nodes }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    SemiInfinite,
    Interval(f64, f64),
}

impl Domain {
    pub const UNIT: Domain = Domain::Interval(0.0, 1.0);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Per-axis rules; axes beyond the end of the list reuse the last entry.
    pub axes: Vec<AxisSpec>,
    pub tolerance: f64,
    pub max_levels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            axes: vec![AxisSpec::new(AxisRule::DoubleExponential, 16)],
            tolerance: 1e-10,
            max_levels: 8,
        }
    }
}

impl QuadratureSpec {
    pub fn uniform(rule: AxisRule, nodes: usize, tolerance: f64, max_levels: usize) -> Self {
        Self {
            axes: vec![AxisSpec::new(rule, nodes)],
            tolerance,
            max_levels,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn axis(&self, i: usize) -> AxisSpec {
        self.axes[i.min(self.axes.len() - 1)]
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(CasimirError::InvalidParameter("quadrature spec has no axes".into()));
        }
        if let Some(a) = self.axes.iter().find(|a| a.nodes < 2) {
            return Err(CasimirError::InvalidParameter(format!(
                "axis node count must be >= 2, got {}",
                a.nodes
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(CasimirError::InvalidParameter(format!(
                "tolerance must lie in (0, 1), got {}",
                self.tolerance
            )));
        }
        if self.max_levels == 0 {
            return Err(CasimirError::InvalidParameter("max_levels must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

impl IntegralEstimate {
    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            self.error_estimate
        } else {
            self.error_estimate / self.value.abs()
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            evaluations: self.evaluations,
        }
    }
}

/// Sum in a fixed binary-tree order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// Integrate `f` over the product of `domains` by tensor-product rules,
/// refining every axis together until two successive levels agree to the
/// spec tolerance.
pub fn integrate_box<F>(f: F, domains: &[Domain], spec: &QuadratureSpec) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.validate()?;
    if domains.is_empty() {
        return Err(CasimirError::InvalidParameter("integration needs at least one axis".into()));
    }
    let mut previous: Option<f64> = None;
    let mut evaluations = 0u64;
    let mut best = IntegralEstimate {
        value: f64::NAN,
        error_estimate: f64::INFINITY,
        evaluations: 0,
    };
    for level in 0..spec.max_levels.max(2) {
        let rules: Vec<Rule1d> = domains
            .iter()
            .enumerate()
            .map(|(i, &d)| Rule1d::build(&spec.axis(i), d, level))
            .collect();
        let (value, magnitude, count) = tensor_sum(&f, &rules)?;
        evaluations += count;
        // differences below this are rounding noise, not discretisation error
        let noise = 64.0 * f64::EPSILON * magnitude;
        if let Some(prev) = previous {
            let error = (value - prev).abs();
            best = IntegralEstimate {
                value,
                error_estimate: error,
                evaluations,
            };
            if error <= spec.tolerance * value.abs() || error <= noise {
                return Ok(best);
            }
        }
        previous = Some(value);
        if level + 1 >= spec.max_levels.max(2) {
            break;
        }
    }
    Err(CasimirError::NotConverged {
        best,
        levels: spec.max_levels.max(2),
    })
}

fn tensor_sum<F>(f: &F, rules: &[Rule1d]) -> Result<(f64, f64, u64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dims = rules.len();
    if dims == 1 && rayon::current_thread_index().is_some() {
        // nested inner integral already running on a worker
        let mut partial = Vec::with_capacity(rules[0].len());
        let mut magnitude = 0.0;
        for (&x, &w) in rules[0].nodes.iter().zip(&rules[0].weights) {
            let v = f(&[x]);
            if !v.is_finite() {
                return Err(CasimirError::IntegrandEvaluation { point: vec![x] });
            }
            partial.push(w * v);
            magnitude += (w * v).abs();
        }
        return Ok((pairwise_sum(&partial), magnitude, rules[0].len() as u64));
    }
    let inner: u64 = rules[1..].iter().map(|r| r.len() as u64).product();
    let total = rules[0].len() as u64 * inner;
    let slices: Vec<(f64, f64)> = rules[0]
        .nodes
        .par_iter()
        .zip(rules[0].weights.par_iter())
        .map(|(&x0, &w0)| {
            let mut point = vec![0.0; dims];
            point[0] = x0;
            let mut idx = vec![0usize; dims];
            let mut partial = Vec::with_capacity(inner as usize);
            let mut magnitude = 0.0;
            loop {
                let mut w = w0;
                for d in 1..dims {
                    point[d] = rules[d].nodes[idx[d]];
                    w *= rules[d].weights[idx[d]];
                }
                let v = f(&point);
                if !v.is_finite() {
                    return Err(CasimirError::IntegrandEvaluation { point });
                }
                partial.push(w * v);
                magnitude += (w * v).abs();
                // odometer over axes 1..dims
                let mut d = dims;
                loop {
                    d -= 1;
                    if d == 0 {
                        return Ok((pairwise_sum(&partial), magnitude));
                    }
                    idx[d] += 1;
                    if idx[d] < rules[d].len() {
                        break;
                    }
                    idx[d] = 0;
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = slices.iter().map(|s| s.0).collect();
    let magnitude = slices.iter().map(|s| s.1).sum();
    Ok((pairwise_sum(&values), magnitude, total))
}

/// `integral_{[0, inf)^n} f`.
pub fn integrate_semi_infinite<F>(f: F, n: usize, spec: &QuadratureSpec) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    integrate_box(f, &vec![Domain::SemiInfinite; n], spec)
}

/// Collects the first error raised inside a nested integrand, which must
/// itself return a plain `f64` to the outer rule.
#[derive(Debug, Default)]
pub struct InnerFailure(std::sync::Mutex<Option<CasimirError>>);

impl InnerFailure {
    pub fn new() -> Self {
        Self::default()
    }

    /// The value, or NaN (which aborts the outer rule) after recording the error.
    pub fn absorb(&self, r: Result<f64>) -> f64 {
        r.unwrap_or_else(|e| {
            self.0.lock().unwrap().get_or_insert(e);
            f64::NAN
        })
    }

    /// Replace the outer rule's generic evaluation error by the inner cause.
    pub fn resolve(self, outer: Result<IntegralEstimate>) -> Result<IntegralEstimate> {
        match (outer, self.0.into_inner().unwrap()) {
            (Err(CasimirError::IntegrandEvaluation { .. }), Some(inner)) => Err(inner),
            (r, _) => r,
        }
    }
}

/// Map a point of the unit cube onto the ordered simplex
/// `0 <= tau_2 <= ... <= tau_k <= total` by nested affine substitution
/// (`tau_{j+1}` ranges over `[tau_j, total]`). Writes the times into `out`
/// and returns the Jacobian.
pub fn unit_cube_to_ordered_simplex(unit: &[f64], total: f64, out: &mut [f64]) -> f64 {
    let mut lower = 0.0;
    let mut jacobian = 1.0;
    for (slot, &a) in out.iter_mut().zip(unit) {
        let width = total - lower;
        jacobian *= width;
        lower += width * a;
        *slot = lower;
    }
    jacobian
}

/// Integrate `f(tau_2, ..., tau_k)` over the ordered simplex of side `total`.
pub fn integrate_ordered_simplex<F>(
    f: F,
    k: usize,
    total: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if k < 2 {
        return Err(CasimirError::InvalidParameter(format!(
            "ordered simplex needs k >= 2 (at least one free time), got {k}"
        )));
    }
    if !(total > 0.0 && total.is_finite()) {
        return Err(CasimirError::InvalidParameter(format!(
            "simplex side must be positive, got {total}"
        )));
    }
    let dims = k - 1;
    integrate_box(
        |u| {
            let mut taus = vec![0.0; dims];
            let jac = unit_cube_to_ordered_simplex(u, total, &mut taus);
            jac * f(&taus)
        },
        &vec![Domain::UNIT; dims],
        spec,
    )
}
