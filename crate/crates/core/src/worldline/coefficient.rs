//! Worldline (scalar) interaction coefficients by deterministic quadrature.
//!
//! At order `k` an *assignment* is an ordered choice of `k` distinct atoms:
//! the first hosts the loop's base point `x(0) = x(T)`, the others are pinned
//! at times `0 < tau_2 < ... < tau_k < T` in that order. Each contributes
//!
//! ```text
//! P_k int_0^inf dT T^{-(k + D/2)} int_{ordered} d tau  [bracket] rho(tau, T),
//! P_k = (-1)^{k+1} / (2^{k+1} k (2 pi)^{D/2})
//! ```
//!
//! with `rho` the pinned-bridge chain density and the bracket `(2k - 1)!!`
//! for TE or the Laplacian expansion for TM.
//!
//! Writing the times as fractions of `T`, the chain is `T`-independent up to
//! `rho = n T^{-(k-1)d/2} exp(-Q/T)` and a bracket polynomial in `1/T`, so
//! the proper-time axis reduces to the moments
//! `I_m = int_0^inf y^m e^{-1/y} dy` (after `T = Q y`), computed once per
//! call. The remaining fraction integral runs on the ordered simplex.

use std::f64::consts::PI;

use crate::error::{CasimirError, Result};
use crate::linalg::Vec3;
use crate::quadrature::{
    integrate_ordered_simplex, integrate_semi_infinite, AxisRule, AxisSpec, IntegralEstimate, QuadratureSpec,
};
use crate::system::{nondimensionalize, AtomSystem, CoefficientResult, DimensionConfig, Method, Mode};

use super::density::{BridgePinning, ChainFactor, GaussianChainDensity};
use super::laplacian::{bracket_polynomial, laplacian_expansion, odd_double_factorial, PairingTable};

/// Rules for the worldline integrals: tanh-sinh on the time fractions and
/// exp-sinh on the proper-time axis.
pub fn default_spec() -> QuadratureSpec {
    QuadratureSpec {
        axes: vec![AxisSpec::new(AxisRule::DoubleExponential, 12)],
        tolerance: 1e-7,
        max_levels: 8,
    }
}

/// `(-1)^{k+1} / (2^{k+1} k (2 pi)^{D/2})`.
pub fn order_prefactor(k: usize, dims: DimensionConfig) -> f64 {
    let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
    sign / (2f64.powi(k as i32 + 1) * k as f64 * (2.0 * PI).powf(dims.spacetime() as f64 / 2.0))
}

/// Ordered `k`-tuples of distinct atoms out of `n`.
pub fn all_assignments(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for a in 0..n {
            if !prefix.contains(&a) {
                prefix.push(a);
                extend(n, k, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// How per-assignment integrals are combined into a three-body coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssignmentConvention {
    /// Sum over every (base, ordering) assignment.
    AllAssignments,
    /// Base point fixed on one atom, summed over the orderings of the rest;
    /// evaluated as the all-assignment sum averaged over the choice of base,
    /// so it is exactly `AllAssignments / k`.
    FixedBase,
}

impl AssignmentConvention {
    fn divisor(&self, k: usize) -> f64 {
        match self {
            AssignmentConvention::AllAssignments => 1.0,
            AssignmentConvention::FixedBase => k as f64,
        }
    }
}

fn pinning_for(system: &AtomSystem, assignment: &[usize], times: &[f64], total: f64) -> Result<BridgePinning> {
    if assignment.len() != times.len() + 1 {
        return Err(CasimirError::InvalidParameter(format!(
            "{} pinned times given for an order-{} assignment",
            times.len(),
            assignment.len()
        )));
    }
    if let Some(&bad) = assignment.iter().find(|&&a| a >= system.len()) {
        return Err(CasimirError::InvalidParameter(format!("assignment refers to missing atom {bad}")));
    }
    let mut ts = Vec::with_capacity(assignment.len());
    ts.push(0.0);
    ts.extend_from_slice(times);
    let points: Vec<Vec3> = assignment.iter().map(|&a| system.positions()[a]).collect();
    BridgePinning::new(total, ts, points)
}

/// TE integrand of one assignment at pinned times `times` (`tau_2..tau_k`)
/// and proper time `total`, in vacuum with `D = 4`:
/// `P_k (2k-1)!! T^{-(k + D/2)} rho`.
pub fn n_body_te_integrand(
    system: &AtomSystem,
    assignment: &[usize],
    times: &[f64],
    total: f64,
) -> Result<f64> {
    let k = assignment.len();
    let dims = DimensionConfig::default();
    let rho = pinning_for(system, assignment, times, total)?.forward_density()?;
    Ok(order_prefactor(k, dims)
        * odd_double_factorial(k)
        * total.powf(-(k as f64 + dims.spacetime() as f64 / 2.0))
        * rho)
}

/// TM analogue of [`n_body_te_integrand`]: the Laplacian expansion applied to
/// the chain density.
pub fn n_body_tm_integrand(
    system: &AtomSystem,
    assignment: &[usize],
    times: &[f64],
    total: f64,
) -> Result<f64> {
    let k = assignment.len();
    let dims = DimensionConfig::default();
    let chain = GaussianChainDensity::from_pinning(&pinning_for(system, assignment, times, total)?);
    let ratios = super::laplacian::graded_laplacian_ratios(&chain);
    let bracket: f64 = laplacian_expansion(k, total)?
        .terms
        .iter()
        .map(|t| {
            let mask = t.subset.iter().fold(0usize, |m, &i| m | 1 << i);
            t.weight * ratios[mask].iter().sum::<f64>()
        })
        .sum();
    Ok(order_prefactor(k, dims) * total.powf(-(k as f64 + dims.spacetime() as f64 / 2.0)) * bracket * chain.value())
}

/// Scalar polarization channels of the worldline formalism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Channels {
    Te,
    Tm,
    Both,
}

impl Channels {
    fn of(mode: Mode) -> Option<Self> {
        match mode {
            Mode::Te => Some(Channels::Te),
            Mode::Tm => Some(Channels::Tm),
            Mode::Total => Some(Channels::Both),
            Mode::CrossTeTm => None,
        }
    }
}

/// Chain at unit proper time for the given time fractions, or `None` when a
/// fraction sits on the simplex boundary (the density vanishes there).
fn unit_time_chain(points: &[Vec3], fractions: &[f64]) -> Option<GaussianChainDensity> {
    let k = points.len();
    let mut factors = Vec::with_capacity(k - 1);
    let mut prev = 0.0;
    for (j, &t) in fractions.iter().enumerate() {
        let j = j + 1;
        let dt = t - prev;
        let a = dt / (1.0 - prev);
        let variance = dt * (1.0 - a);
        if !(variance > 0.0) {
            return None;
        }
        let mut c = vec![0.0; k];
        c[j] += 1.0;
        c[j - 1] -= 1.0 - a;
        c[0] -= a;
        factors.push(ChainFactor {
            coefficients: c,
            variance,
        });
        prev = t;
    }
    GaussianChainDensity::new(points.to_vec(), factors).ok()
}

/// `I_m = int_0^inf y^m e^{-1/y} dy` (`= Gamma(-m - 1)`), by quadrature in
/// the inverse proper time `z = 1/y`, where the integrand is `z^{-m-2} e^{-z}`.
pub fn proper_time_moment(m: f64, spec: &QuadratureSpec) -> Result<IntegralEstimate> {
    if m >= -1.0 {
        return Err(CasimirError::Domain(format!("proper-time moment diverges for m = {m}")));
    }
    let power = -m - 2.0;
    integrate_semi_infinite(
        |z| {
            let z = z[0];
            if z == 0.0 {
                if power == 0.0 { 1.0 } else { 0.0 }
            } else {
                (power * z.ln() - z).exp()
            }
        },
        1,
        spec,
    )
}

/// Energy contributed by one assignment (`alpha = 1`, positions as given),
/// including the order prefactor.
fn assignment_energy(
    points: &[Vec3],
    channels: Channels,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    let k = points.len();
    let dims = DimensionConfig::default();
    let d = dims.spatial() as f64;
    // T^{-(k + D/2)} * T^{k-1} (fractions -> times) * T^{-(k-1) d / 2}
    let power = -(k as f64 + dims.spacetime() as f64 / 2.0) + (k as f64 - 1.0) * (1.0 - d / 2.0);
    let moments: Vec<IntegralEstimate> = (0..=k)
        .map(|j| proper_time_moment(power - j as f64, spec))
        .collect::<Result<_>>()?;
    let te_bracket = odd_double_factorial(k);
    let table = PairingTable::new(k);
    let outer = integrate_ordered_simplex(
        |fractions| {
            let Some(chain) = unit_time_chain(points, fractions) else {
                return 0.0;
            };
            let q = chain.quadratic_form();
            let mut bracket = vec![0.0; k + 1];
            if matches!(channels, Channels::Te | Channels::Both) {
                bracket[0] += te_bracket;
            }
            if matches!(channels, Channels::Tm | Channels::Both) {
                for (b, c) in bracket.iter_mut().zip(bracket_polynomial(&table, &chain)) {
                    *b += c;
                }
            }
            // int dT T^{power - j} e^{-q/T} = q^{power - j + 1} I_{power - j}
            let radial: f64 = bracket
                .iter()
                .zip(&moments)
                .enumerate()
                .map(|(j, (b, m))| b * m.value * q.powf(power - j as f64 + 1.0))
                .sum();
            chain.norm() * radial
        },
        k,
        1.0,
        spec,
    )?;
    let moment_error = moments.iter().map(|m| m.relative_error()).fold(0.0, f64::max);
    let prefactor = order_prefactor(k, dims);
    Ok(IntegralEstimate {
        value: outer.value * prefactor,
        error_estimate: (outer.error_estimate + moment_error * outer.value.abs()) * prefactor.abs(),
        evaluations: outer.evaluations + moments.iter().map(|m| m.evaluations).sum::<u64>(),
    })
}

/// Per-assignment energies of a nondimensionalized system.
pub fn assignment_energies(
    system: &AtomSystem,
    k: usize,
    mode: Mode,
    spec: &QuadratureSpec,
) -> Result<Vec<(Vec<usize>, IntegralEstimate)>> {
    let channels = Channels::of(mode).ok_or_else(|| {
        CasimirError::InvalidParameter("the scalar worldline has no TE/TM cross channel".into())
    })?;
    if k < 2 || k > system.len() {
        return Err(CasimirError::InvalidParameter(format!(
            "order {k} needs between 2 and {} atoms",
            system.len()
        )));
    }
    all_assignments(system.len(), k)
        .into_iter()
        .map(|a| {
            let points: Vec<Vec3> = a.iter().map(|&i| system.positions()[i]).collect();
            assignment_energy(&points, channels, spec).map(|e| (a, e))
        })
        .collect()
}

fn combine(parts: &[(Vec<usize>, IntegralEstimate)]) -> (f64, f64) {
    let value = crate::quadrature::pairwise_sum(&parts.iter().map(|p| p.1.value).collect::<Vec<_>>());
    let error = parts.iter().map(|p| p.1.error_estimate).sum();
    (value, error)
}

fn zero_cross(order: u32) -> CoefficientResult {
    CoefficientResult::new(0.0, 0.0, Method::Worldline, Mode::CrossTeTm, order)
}

/// Two-body coefficient in units of `alpha1 alpha2 / ((4 pi)^2 r^7)`.
/// The cross mode is identically zero in the scalar theory.
pub fn two_body_coefficient(system: &AtomSystem, mode: Mode, spec: &QuadratureSpec) -> Result<CoefficientResult> {
    if system.len() != 2 {
        return Err(CasimirError::InvalidGeometry(format!(
            "two-body coefficient needs 2 atoms, got {}",
            system.len()
        )));
    }
    if mode == Mode::CrossTeTm {
        return Ok(zero_cross(2));
    }
    let system = nondimensionalize(system)?;
    let (value, error) = combine(&assignment_energies(&system, 2, mode, spec)?);
    let unit = (4.0 * PI).powi(2);
    Ok(CoefficientResult::new(value * unit, error * unit, Method::Worldline, mode, 2))
}

pub fn te_two_body_coefficient(system: &AtomSystem, spec: &QuadratureSpec) -> Result<CoefficientResult> {
    two_body_coefficient(system, Mode::Te, spec)
}

pub fn tm_two_body_coefficient(system: &AtomSystem, spec: &QuadratureSpec) -> Result<CoefficientResult> {
    two_body_coefficient(system, Mode::Tm, spec)
}

/// Three-body coefficient in units of `alpha1 alpha2 alpha3 / (pi (4 pi)^3 R^10)`,
/// `R` the largest separation.
pub fn three_body_coefficient(
    system: &AtomSystem,
    mode: Mode,
    convention: AssignmentConvention,
    spec: &QuadratureSpec,
) -> Result<CoefficientResult> {
    if system.len() != 3 {
        return Err(CasimirError::InvalidGeometry(format!(
            "three-body coefficient needs 3 atoms, got {}",
            system.len()
        )));
    }
    if mode == Mode::CrossTeTm {
        return Ok(zero_cross(3));
    }
    let system = nondimensionalize(system)?;
    let (value, error) = combine(&assignment_energies(&system, 3, mode, spec)?);
    let unit = PI * (4.0 * PI).powi(3) / convention.divisor(3);
    Ok(CoefficientResult::new(value * unit, error * unit, Method::Worldline, mode, 3))
}

/// TE three-body coefficient summed over all assignments.
pub fn te_three_body_coefficient(system: &AtomSystem, spec: &QuadratureSpec) -> Result<CoefficientResult> {
    three_body_coefficient(system, Mode::Te, AssignmentConvention::AllAssignments, spec)
}

/// TM three-body coefficient summed over all assignments.
pub fn tm_three_body_coefficient(system: &AtomSystem, spec: &QuadratureSpec) -> Result<CoefficientResult> {
    three_body_coefficient(system, Mode::Tm, AssignmentConvention::AllAssignments, spec)
}

/// TE + TM with the base point fixed on one atom, the quantity compared
/// against the Green-tensor total across geometries.
pub fn scalar_sum_fixed_base(system: &AtomSystem, spec: &QuadratureSpec) -> Result<CoefficientResult> {
    three_body_coefficient(system, Mode::Total, AssignmentConvention::FixedBase, spec)
}
