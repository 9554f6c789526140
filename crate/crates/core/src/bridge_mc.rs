//! Seeded Brownian-bridge sampling and a Monte Carlo estimate of the
//! two-body TE worldline coefficient.
//!
//! Paths live on a uniform grid of `n_steps` intervals over `[0, T]`. Pinned
//! times are snapped to the nearest node and each segment between pins is an
//! exact bridge built by the conditional Gaussian recursion, so the path hits
//! every pin exactly.
//!
//! Path `i` of a run draws from a ChaCha stream keyed by `(seed, i)`, so
//! results do not depend on evaluation order or thread count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::error::{CasimirError, Result};
use crate::linalg::Vec3;
use crate::worldline::{odd_double_factorial, order_prefactor, BridgePinning};
use crate::system::DimensionConfig;

/// A discretized closed loop: `nodes[j]` sits at time `j T / n_steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub nodes: Vec<Vec3>,
    pub pinning: BridgePinning,
    /// Grid index of every pin, `pin_nodes[0] = 0`.
    pub pin_nodes: Vec<usize>,
    pub seed: u64,
}

impl PathSample {
    pub fn n_steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn time(&self, node: usize) -> f64 {
        self.pinning.total() * node as f64 / self.n_steps() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub n_paths: u64,
    pub seed: u64,
    /// Largest `|tau_snapped - tau| / T` over all sampled pins.
    pub snap_error_bound: f64,
}

/// Generator for path `index` of a run seeded with `seed`.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Nearest grid node of every pin; errors if two pins share a node or a
/// segment gets fewer than two steps.
fn snap_pins(pinning: &BridgePinning, n_steps: usize) -> Result<Vec<usize>> {
    let total = pinning.total();
    let nodes: Vec<usize> = pinning
        .times()
        .iter()
        .map(|t| (t / total * n_steps as f64).round() as usize)
        .collect();
    let mut bounds = nodes.clone();
    bounds.push(n_steps);
    for (j, w) in bounds.windows(2).enumerate() {
        if w[1] < w[0] + 2 {
            return Err(CasimirError::GridResolution(format!(
                "pins {j} and {} land on nodes {} and {} of a {n_steps}-step grid",
                j + 1,
                w[0],
                w[1]
            )));
        }
    }
    Ok(nodes)
}

/// Fill `nodes[from..=to]` with a bridge from `nodes[from]` to `end`.
fn fill_segment<R: Rng>(nodes: &mut [Vec3], from: usize, to: usize, end: Vec3, dt: f64, rng: &mut R) {
    for j in from..to - 1 {
        let left = (to - j) as f64 * dt;
        let a = dt / left;
        let sd = (dt * (left - dt) / left).sqrt();
        let x = nodes[j];
        for c in 0..3 {
            let z: f64 = StandardNormal.sample(rng);
            nodes[j + 1][c] = x[c] + (end[c] - x[c]) * a + sd * z;
        }
    }
    nodes[to] = end;
}

fn sample_with<R: Rng>(pinning: &BridgePinning, n_steps: usize, pin_nodes: Vec<usize>, seed: u64, rng: &mut R) -> PathSample {
    let dt = pinning.total() / n_steps as f64;
    let points = pinning.points();
    let mut nodes = vec![[0.0; 3]; n_steps + 1];
    nodes[0] = pinning.base();
    for j in 0..pin_nodes.len() {
        let (to, end) = match pin_nodes.get(j + 1) {
            Some(&n) => (n, points[j + 1]),
            None => (n_steps, pinning.base()),
        };
        fill_segment(&mut nodes, pin_nodes[j], to, end, dt, rng);
    }
    PathSample {
        nodes,
        pinning: pinning.clone(),
        pin_nodes,
        seed,
    }
}

/// One closed path through every pin of `pinning`, deterministic in `seed`.
pub fn sample_bridge(pinning: &BridgePinning, n_steps: usize, seed: u64) -> Result<PathSample> {
    let pin_nodes = snap_pins(pinning, n_steps)?;
    Ok(sample_with(pinning, n_steps, pin_nodes, seed, &mut path_rng(seed, 0)))
}

/// Trapezoidal line average of `field` along the path.
pub fn path_average<F: Fn(Vec3) -> f64>(field: F, path: &PathSample) -> Result<f64> {
    let n = path.n_steps();
    let mut first = None;
    let mut sum = 0.0;
    for (j, &x) in path.nodes.iter().enumerate() {
        let f = field(x);
        if !f.is_finite() {
            return Err(CasimirError::FieldEvaluation { node: j });
        }
        // deviations from the first value keep constant fields exact
        let f0 = *first.get_or_insert(f);
        sum += if j == 0 || j == n { 0.5 * (f - f0) } else { f - f0 };
    }
    Ok(first.unwrap_or(0.0) + sum / n as f64)
}

/// Pairwise sum, fixed by the order of `xs`.
fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Grid used for the path-average factor in the two-body estimator.
pub const TWO_BODY_STEPS: usize = 32;

/// Monte Carlo estimate of the two-body TE coefficient (units of
/// `alpha1 alpha2 / ((4 pi)^2 r^7)`) in vacuum.
pub fn mc_te_two_body(r: f64, n_paths: u64, seed: u64) -> Result<McEstimate> {
    mc_te_two_body_in_medium(r, 1.0, n_paths, seed)
}

/// As [`mc_te_two_body`] in a medium of constant relative permittivity
/// `eps_r`, which enters through the path-averaged factor
/// `<eps_r>^{-5/2}`.
///
/// With `tau = t T`, `t` uniform and `T ~ InvGamma(7/2, r^2 / (2 t (1 - t)))`
/// the proper-time integral of the pinning density is exact, leaving the
/// weight `Gamma(7/2) beta^{-7/2} (2 pi t (1 - t))^{-3/2}`. Each sample then
/// draws a loop of that `T` pinned at the second atom for the path average.
pub fn mc_te_two_body_in_medium(r: f64, eps_r: f64, n_paths: u64, seed: u64) -> Result<McEstimate> {
    if n_paths == 0 {
        return Err(CasimirError::InvalidParameter("n_paths must be positive".into()));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(CasimirError::InvalidGeometry(format!("separation must be positive, got {r}")));
    }
    if !(eps_r > 0.0 && eps_r.is_finite()) {
        return Err(CasimirError::InvalidParameter(format!("eps_r must be positive, got {eps_r}")));
    }
    let shape = 3.5;
    let gamma_shape = Gamma::new(shape, 1.0).expect("valid gamma shape");
    let gamma_fn = 15.0 * PI.sqrt() / 8.0;
    let n = TWO_BODY_STEPS;
    // both assignments, TE bracket (2k-1)!!, coefficient units
    let k = 2;
    let pre = 2.0 * order_prefactor(k, DimensionConfig::default()) * odd_double_factorial(k) * (4.0 * PI).powi(2)
        * r.powi(7);
    let samples: Vec<Result<(f64, f64)>> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i);
            let t: f64 = rng.random_range(f64::EPSILON..1.0);
            let v = t * (1.0 - t);
            let beta = r * r / (2.0 * v);
            let g: f64 = gamma_shape.sample(&mut rng);
            let total = beta / g;
            let weight = gamma_fn * beta.powf(-shape) * (2.0 * PI * v).powf(-1.5);
            let node = ((t * n as f64).round() as usize).clamp(2, n - 2);
            let snap = (node as f64 / n as f64 - t).abs();
            let pinning = BridgePinning::new(
                total,
                vec![0.0, total * node as f64 / n as f64],
                vec![[0.0; 3], [0.0, 0.0, r]],
            )?;
            let path = sample_with(&pinning, n, vec![0, node], seed, &mut rng);
            let avg = path_average(|_| eps_r, &path)?;
            Ok((pre * weight * avg.powf(-2.5), snap))
        })
        .collect();
    let mut values = Vec::with_capacity(samples.len());
    let mut snap_error_bound: f64 = 0.0;
    for s in samples {
        let (v, snap) = s?;
        values.push(v);
        snap_error_bound = snap_error_bound.max(snap);
    }
    let count = n_paths as f64;
    let mean = pairwise_sum(&values) / count;
    let squares: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let variance = if n_paths > 1 { pairwise_sum(&squares) / (count - 1.0) } else { 0.0 };
    Ok(McEstimate {
        mean,
        standard_error: (variance / count).sqrt(),
        n_paths,
        seed,
        snap_error_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_at_origin(total: f64) -> BridgePinning {
        BridgePinning::closed_loop(total, [0.0; 3]).unwrap()
    }

    #[test]
    fn pins_are_hit_exactly() {
        let p = BridgePinning::new(2.0, vec![0.0, 0.5, 1.25], vec![[0.1, 0.2, 0.3], [1.0, -1.0, 0.5], [0.0, 2.0, 0.0]])
            .unwrap();
        let path = sample_bridge(&p, 16, 7).unwrap();
        assert_eq!(path.pin_nodes, vec![0, 4, 10]);
        assert_eq!(path.nodes[4], [1.0, -1.0, 0.5]);
        assert_eq!(path.nodes[10], [0.0, 2.0, 0.0]);
        assert_eq!(path.nodes[0], path.nodes[16]);
        assert_eq!(path.time(4), 0.5);
    }

    #[test]
    fn colliding_pins_are_rejected() {
        let p = BridgePinning::new(1.0, vec![0.0, 0.50, 0.52], vec![[0.0; 3]; 3]).unwrap();
        assert!(matches!(sample_bridge(&p, 8, 1), Err(CasimirError::GridResolution(_))));
        assert!(sample_bridge(&p, 200, 1).is_ok());
    }

    #[test]
    fn seeds_are_reproducible() {
        let p = loop_at_origin(1.0);
        assert_eq!(sample_bridge(&p, 20, 3).unwrap(), sample_bridge(&p, 20, 3).unwrap());
        assert_ne!(sample_bridge(&p, 20, 3).unwrap(), sample_bridge(&p, 20, 4).unwrap());
    }

    #[test]
    fn constant_field_average() {
        let path = sample_bridge(&loop_at_origin(1.0), 10, 0).unwrap();
        assert_eq!(path_average(|_| 2.5, &path).unwrap(), 2.5);
        let bad = path_average(|x| if x == path.nodes[3] { f64::NAN } else { 1.0 }, &path);
        assert_eq!(bad, Err(CasimirError::FieldEvaluation { node: 3 }));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(mc_te_two_body(1.0, 0, 1).is_err());
        assert!(mc_te_two_body(0.0, 10, 1).is_err());
    }

    #[test]
    fn medium_factor_scales_estimate() {
        let vac = mc_te_two_body(1.0, 200, 5).unwrap();
        let med = mc_te_two_body_in_medium(1.0, 2.0, 200, 5).unwrap();
        assert!((med.mean - vac.mean * 2f64.powf(-2.5)).abs() < 1e-12 * vac.mean.abs());
    }

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499500.0);
    }
}
