//! Pinned Brownian-bridge densities and their product ("chain") form.
//!
//! Bridges use unit diffusion: a closed loop of proper time `T` visited at
//! time `tau` has variance `tau (1 - tau / T)` per dimension.

use std::f64::consts::PI;

use crate::error::{CasimirError, Result};
use crate::linalg::Vec3;

fn gaussian(displacement_sq: f64, variance: f64, d: usize) -> f64 {
    // log space: a tiny variance overflows the prefactor before the exponent underflows
    (-(d as f64) / 2.0 * (2.0 * PI * variance).ln() - displacement_sq / (2.0 * variance)).exp()
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Per-dimension variance of a closed bridge of proper time `total` at `tau`.
pub fn bridge_variance(tau: f64, total: f64) -> f64 {
    tau * (1.0 - tau / total)
}

/// Density of a closed bridge of proper time `total` through `start` being at
/// `target` at time `tau`. The dimension is `start.len()`.
pub fn bridge_density(tau: f64, total: f64, start: &[f64], target: &[f64]) -> Result<f64> {
    if !(tau > 0.0 && tau < total) {
        return Err(CasimirError::Domain(format!("bridge time {tau} outside (0, {total})")));
    }
    if start.len() != target.len() {
        return Err(CasimirError::InvalidParameter("start and target dimensions differ".into()));
    }
    Ok(gaussian(dist_sq(start, target), bridge_variance(tau, total), start.len()))
}

/// Mean and per-dimension variance of the bridge at `tau_new` given it
/// passed `r_prev` at `tau_prev`; the loop is closed at `base`.
///
/// Conditioning forward (`tau_new > tau_prev`) leaves a bridge from `r_prev`
/// to `base` over the remaining time; conditioning backward gives a bridge
/// from `base` (time 0) to `r_prev`.
pub fn conditional_moments(
    tau_new: f64,
    tau_prev: f64,
    r_prev: &[f64],
    total: f64,
    base: &[f64],
) -> Result<(Vec<f64>, f64)> {
    for t in [tau_new, tau_prev] {
        if !(t > 0.0 && t < total) {
            return Err(CasimirError::Domain(format!("conditioning time {t} outside (0, {total})")));
        }
    }
    if tau_new == tau_prev {
        return Err(CasimirError::Domain(format!("coincident conditioning times {tau_new}")));
    }
    Ok(if tau_new > tau_prev {
        let dt = tau_new - tau_prev;
        let a = dt / (total - tau_prev);
        let mean = r_prev.iter().zip(base).map(|(p, b)| p * (1.0 - a) + b * a).collect();
        (mean, dt * (1.0 - a))
    } else {
        let a = tau_new / tau_prev;
        let mean = base.iter().zip(r_prev).map(|(b, p)| b * (1.0 - a) + p * a).collect();
        (mean, tau_new * (1.0 - a))
    })
}

/// Density of the bridge at `(tau_new, r_new)` given it passed
/// `(tau_prev, r_prev)`; see [`conditional_moments`].
pub fn conditional_density(
    tau_new: f64,
    r_new: &[f64],
    tau_prev: f64,
    r_prev: &[f64],
    total: f64,
    base: &[f64],
) -> Result<f64> {
    let (mean, variance) = conditional_moments(tau_new, tau_prev, r_prev, total, base)?;
    Ok(gaussian(dist_sq(r_new, &mean), variance, r_new.len()))
}

/// A closed loop of proper time `total` pinned at `points[j]` at `times[j]`,
/// with `times[0] = 0` and `points[0]` the base point (also the end point).
#[derive(Debug, Clone, PartialEq)]
pub struct BridgePinning {
    total: f64,
    times: Vec<f64>,
    points: Vec<Vec3>,
}

impl BridgePinning {
    pub fn new(total: f64, times: Vec<f64>, points: Vec<Vec3>) -> Result<Self> {
        if !(total > 0.0 && total.is_finite()) {
            return Err(CasimirError::InvalidParameter(format!("total time must be positive, got {total}")));
        }
        if times.is_empty() || times.len() != points.len() {
            return Err(CasimirError::InvalidParameter(
                "pinning needs matching, non-empty times and points".into(),
            ));
        }
        if times[0] != 0.0 {
            return Err(CasimirError::Domain(format!("first pin must be at time 0, got {}", times[0])));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || *times.last().unwrap() >= total {
            return Err(CasimirError::Domain(format!(
                "pin times must increase strictly inside [0, {total}): {times:?}"
            )));
        }
        Ok(Self { total, times, points })
    }

    /// A loop pinned only at its base point.
    pub fn closed_loop(total: f64, base: Vec3) -> Result<Self> {
        Self::new(total, vec![0.0], vec![base])
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn base(&self) -> Vec3 {
        self.points[0]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `f(r_2) f(r_3 | r_2) ... f(r_k | r_{k-1})`, conditioning in time order.
    pub fn forward_density(&self) -> Result<f64> {
        let base = self.base();
        let mut p = 1.0;
        for j in 1..self.len() {
            p *= if j == 1 {
                bridge_density(self.times[1], self.total, &base, &self.points[1])?
            } else {
                conditional_density(
                    self.times[j],
                    &self.points[j],
                    self.times[j - 1],
                    &self.points[j - 1],
                    self.total,
                    &base,
                )?
            };
        }
        Ok(p)
    }

    /// The same joint density conditioned in reverse time order,
    /// `f(r_k) f(r_{k-1} | r_k) ... f(r_2 | r_3)`.
    pub fn backward_density(&self) -> Result<f64> {
        let base = self.base();
        let k = self.len();
        if k == 1 {
            return Ok(1.0);
        }
        let mut p = bridge_density(self.times[k - 1], self.total, &base, &self.points[k - 1])?;
        for j in (1..k - 1).rev() {
            p *= conditional_density(
                self.times[j],
                &self.points[j],
                self.times[j + 1],
                &self.points[j + 1],
                self.total,
                &base,
            )?;
        }
        Ok(p)
    }
}

/// One Gaussian factor `(2 pi v)^{-d/2} exp(-|sum_i c_i x_i|^2 / 2v)` of a
/// chain, with `c` indexing the chain's points.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainFactor {
    pub coefficients: Vec<f64>,
    pub variance: f64,
}

/// A product of bridge Gaussians over `d = 3` spatial dimensions, written as
/// `norm * exp(-1/2 sum_alpha x_alpha^T L x_alpha)` where `x_alpha` collects
/// coordinate `alpha` of every point.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChainDensity {
    points: Vec<Vec3>,
    factors: Vec<ChainFactor>,
}

impl GaussianChainDensity {
    pub const DIM: usize = 3;

    pub fn new(points: Vec<Vec3>, factors: Vec<ChainFactor>) -> Result<Self> {
        for f in &factors {
            if f.coefficients.len() != points.len() {
                return Err(CasimirError::InvalidParameter("factor coefficients must cover every point".into()));
            }
            if !(f.variance > 0.0 && f.variance.is_finite()) {
                return Err(CasimirError::Domain(format!("chain variance must be positive, got {}", f.variance)));
            }
        }
        Ok(Self { points, factors })
    }

    /// The forward-conditioned chain of a pinning: factor `j` is
    /// `f(r_j | r_{j-1})` with mean `r_{j-1}(1 - a) + r_1 a`,
    /// `a = (tau_j - tau_{j-1}) / (T - tau_{j-1})`.
    pub fn from_pinning(pinning: &BridgePinning) -> Self {
        let k = pinning.len();
        let (t, total) = (pinning.times(), pinning.total());
        let factors = (1..k)
            .map(|j| {
                let dt = t[j] - t[j - 1];
                let a = dt / (total - t[j - 1]);
                let mut c = vec![0.0; k];
                c[j] += 1.0;
                c[j - 1] -= 1.0 - a;
                c[0] -= a;
                ChainFactor {
                    coefficients: c,
                    variance: dt * (1.0 - a),
                }
            })
            .collect();
        Self {
            points: pinning.points().to_vec(),
            factors,
        }
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn factors(&self) -> &[ChainFactor] {
        &self.factors
    }

    pub fn with_points(&self, points: Vec<Vec3>) -> Self {
        Self {
            points,
            factors: self.factors.clone(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| (2.0 * PI * f.variance).powf(-(Self::DIM as f64) / 2.0))
            .product()
    }

    /// `L = sum_j c_j c_j^T / v_j`.
    pub fn precision(&self) -> Vec<Vec<f64>> {
        let n = self.points.len();
        let mut l = vec![vec![0.0; n]; n];
        for f in &self.factors {
            for i in 0..n {
                for j in 0..n {
                    l[i][j] += f.coefficients[i] * f.coefficients[j] / f.variance;
                }
            }
        }
        l
    }

    /// `1/2 sum_alpha x_alpha^T L x_alpha`.
    pub fn quadratic_form(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| {
                let mut r = [0.0; 3];
                for (c, p) in f.coefficients.iter().zip(&self.points) {
                    for a in 0..3 {
                        r[a] += c * p[a];
                    }
                }
                (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]) / (2.0 * f.variance)
            })
            .sum()
    }

    pub fn value(&self) -> f64 {
        self.norm() * (-self.quadratic_form()).exp()
    }
}
