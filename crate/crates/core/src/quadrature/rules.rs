//! One-dimensional node/weight tables.
//!
//! Every rule is generated for a given refinement level; level `l` halves the
//! step (double-exponential rules) or doubles the node count (Gauss-Legendre)
//! relative to level `l - 1`.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{AxisRule, AxisSpec, Domain};

/// Half-width of the truncated `t` range for the tanh-sinh map on (0, 1).
const TANH_SINH_TMAX: f64 = 3.5;
/// Lower and upper `t` limits for the exp-sinh map on (0, inf).
const EXP_SINH_TMIN: f64 = -4.0;
const EXP_SINH_TMAX: f64 = 3.2;

#[derive(Debug, Clone)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn build(axis: &AxisSpec, domain: Domain, level: usize) -> Self {
        match (axis.rule, domain) {
            (AxisRule::GaussLegendreMapped, Domain::SemiInfinite) => {
                tan_mapped_gauss_legendre(axis.nodes << level)
            }
            (AxisRule::GaussLegendreMapped, Domain::Interval(a, b)) => {
                let (x, w) = gauss_legendre_unit(axis.nodes << level);
                affine(&x, &w, a, b)
            }
            (AxisRule::DoubleExponential, Domain::SemiInfinite) => exp_sinh(axis.nodes, level),
            (AxisRule::ExpTransform, Domain::SemiInfinite) => log_mapped_tanh_sinh(axis.nodes, level),
            (AxisRule::DoubleExponential | AxisRule::ExpTransform, Domain::Interval(a, b)) => {
                tanh_sinh_interval(axis.nodes, level, a, b)
            }
        }
    }
}

fn de_steps(nodes: usize, level: usize, span: f64) -> (f64, usize) {
    let base = (nodes.max(2) - 1) as f64;
    let h = span / base / (1u64 << level) as f64;
    let count = ((nodes.max(2) - 1) << level) + 1;
    (h, count)
}

/// Tanh-sinh points on (0, 1) as `(x, 1 - x, dx/dt)`, computed so that both
/// `x` and its complement keep full relative precision near the endpoints.
fn tanh_sinh_unit(nodes: usize, level: usize) -> Vec<(f64, f64, f64)> {
    let (h, count) = de_steps(nodes, level, 2.0 * TANH_SINH_TMAX);
    (0..count)
        .map(|i| {
            let t = -TANH_SINH_TMAX + i as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            let x = 1.0 / (1.0 + (-2.0 * u).exp());
            let xc = 1.0 / (1.0 + (2.0 * u).exp());
            let dxdt = PI * t.cosh() * x * xc;
            (x, xc, dxdt * h)
        })
        .filter(|&(x, xc, w)| x > 0.0 && xc > 0.0 && w > 0.0)
        .collect()
}

fn tanh_sinh_interval(nodes: usize, level: usize, a: f64, b: f64) -> Rule1d {
    let width = b - a;
    let (nodes, weights) = tanh_sinh_unit(nodes, level)
        .into_iter()
        .map(|(x, xc, w)| {
            let p = if x <= 0.5 { a + width * x } else { b - width * xc };
            (p, w * width)
        })
        .filter(|&(p, _)| p > a && p < b)
        .unzip();
    Rule1d { nodes, weights }
}

/// `x = -ln(1 - t)` with tanh-sinh nodes in `t`.
fn log_mapped_tanh_sinh(nodes: usize, level: usize) -> Rule1d {
    let (nodes, weights) = tanh_sinh_unit(nodes, level)
        .into_iter()
        .map(|(x, xc, w)| {
            let p = if x <= 0.5 { -(-x).ln_1p() } else { -xc.ln() };
            (p, w / xc)
        })
        .unzip();
    Rule1d { nodes, weights }
}

/// `x = exp(pi/2 sinh t)`.
fn exp_sinh(nodes: usize, level: usize) -> Rule1d {
    let (h, count) = de_steps(nodes, level, EXP_SINH_TMAX - EXP_SINH_TMIN);
    let (nodes, weights) = (0..count)
        .map(|i| {
            let t = EXP_SINH_TMIN + i as f64 * h;
            let x = (FRAC_PI_2 * t.sinh()).exp();
            (x, x * FRAC_PI_2 * t.cosh() * h)
        })
        .filter(|&(x, w)| x > 0.0 && x.is_finite() && w.is_finite())
        .unzip();
    Rule1d { nodes, weights }
}

/// `x = tan(pi t / 2)` with Gauss-Legendre nodes in `t` on (0, 1).
fn tan_mapped_gauss_legendre(n: usize) -> Rule1d {
    let (t, w) = gauss_legendre_unit(n);
    let (nodes, weights) = t
        .iter()
        .zip(&w)
        .map(|(&t, &w)| {
            let arg = FRAC_PI_2 * t;
            let c = arg.cos();
            (arg.tan(), w * FRAC_PI_2 / (c * c))
        })
        .unzip();
    Rule1d { nodes, weights }
}

fn affine(x: &[f64], w: &[f64], a: f64, b: f64) -> Rule1d {
    let width = b - a;
    Rule1d {
        nodes: x.iter().map(|&x| a + width * x).collect(),
        weights: w.iter().map(|&w| w * width).collect(),
    }
}

/// Gauss-Legendre nodes and weights on (0, 1), ascending.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let n = n.max(1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Newton iteration on P_n from the Tricomi initial guess.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        dp = if d != 0.0 { d } else { dp };
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        // map [-1, 1] -> [0, 1]; z > 0 for the first half
        x[n - 1 - i] = 0.5 * (1.0 + z);
        x[i] = 0.5 * (1.0 - z);
        w[n - 1 - i] = 0.5 * weight;
        w[i] = 0.5 * weight;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}
