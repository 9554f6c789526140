//! Plane-wave (Weyl) evaluation of the two- and three-body Green-tensor
//! coefficients for atoms on the z-axis.
//!
//! With every atom on the axis the transverse phases vanish, each Green
//! tensor's azimuthal integral factorises, and a factor with separation `z`
//! reduces to
//!
//! ```text
//! G(z, is) = -(1/8 pi^2) * diag( F(s, z) ),
//! F_i(s, z) = int_0^inf dk_rho (k_rho / kappa) [s^2 Abar(s, kappa)]_ii e^{-kappa z}
//! ```
//!
//! so a trace of `n` factors is `sum_i prod_j F_i(s, z_j)`, leaving nested
//! one-dimensional quadratures in `k_rho` and an outer one in `s`.

use std::f64::consts::PI;
use super::projector::{weighted_angular_projector, Polarization};
use super::trace::{angular_trace, TripleTerm};
use crate::error::{CasimirError, Result};
use crate::quadrature::{integrate_semi_infinite, InnerFailure, IntegralEstimate, QuadratureSpec};
use crate::system::{nondimensionalize, AtomSystem, CoefficientResult, Method, Mode};

/// Default rules for the plane-wave integrals.
pub fn default_spec() -> QuadratureSpec {
    QuadratureSpec::uniform(crate::quadrature::AxisRule::DoubleExponential, 24, 1e-10, 9)
}

/// Azimuth-integrated factor `F(s, z)` for one polarization, by quadrature
/// over `k_rho`.
pub fn axial_factor(pol: Polarization, s: f64, z: f64, spec: &QuadratureSpec) -> Result<[f64; 3]> {
    if !(z > 0.0) {
        return Err(CasimirError::InvalidGeometry(format!("axial separation must be positive, got {z}")));
    }
    if s == 0.0 {
        return Ok([0.0; 3]);
    }
    // e^{-kappa z} = e^{-s z} e^{-(kappa - s) z}; pull the first factor out
    let damping = (-s * z).exp();
    if damping == 0.0 {
        return Ok([0.0; 3]);
    }
    let component = |i: usize| -> Result<f64> {
        let est = integrate_semi_infinite(
            |x| {
                let k_rho = x[0];
                let kappa = s.hypot(k_rho);
                let excess = k_rho * k_rho / (kappa + s);
                let m = weighted_angular_projector(pol, s, kappa)[i];
                k_rho / kappa * m * (-excess * z).exp()
            },
            1,
            spec,
        )?;
        Ok(est.value * damping)
    };
    let xy = component(0)?;
    let zz = match pol {
        Polarization::Te => 0.0,
        Polarization::Tm => component(2)?,
    };
    Ok([xy, xy, zz])
}

/// Integrate an `s`-integrand whose evaluation can itself fail, surfacing the
/// inner error rather than a generic non-finite value.
fn integrate_nested<F>(f: F, spec: &QuadratureSpec) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let failure = InnerFailure::new();
    let outer = integrate_semi_infinite(|x| failure.absorb(f(x[0])), 1, spec);
    failure.resolve(outer)
}

fn inner_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    spec.clone().with_tolerance((spec.tolerance * 1e-2).max(1e-14))
}

fn two_body_pairs(mode: Mode) -> &'static [(Polarization, Polarization)] {
    use Polarization::{Te as E, Tm as H};
    match mode {
        Mode::Te => &[(E, E)],
        Mode::Tm => &[(H, H)],
        Mode::CrossTeTm => &[(H, E), (E, H)],
        Mode::Total => &[(E, E), (H, H), (H, E), (E, H)],
    }
}

/// Two-body coefficient (`V = value / ((4 pi)^2 r^7)`) for one polarization
/// channel. The system is moved rigidly onto the z-axis and rescaled to unit
/// separation first.
pub fn two_body_coefficient(system: &AtomSystem, mode: Mode, spec: &QuadratureSpec) -> Result<CoefficientResult> {
    if system.len() != 2 {
        return Err(CasimirError::InvalidGeometry(format!(
            "two-body coefficient needs 2 atoms, got {}",
            system.len()
        )));
    }
    let system = nondimensionalize(&system.aligned_to_z(0, 1))?;
    let z = system.distance(0, 1);
    let inner = inner_spec(spec);
    let pairs = two_body_pairs(mode);
    let est = integrate_nested(
        |s| {
            let fe = axial_factor(Polarization::Te, s, z, &inner)?;
            let fh = axial_factor(Polarization::Tm, s, z, &inner)?;
            let pick = |p: Polarization| if p == Polarization::Te { fe } else { fh };
            Ok(pairs.iter().map(|&(p, q)| angular_trace(&[pick(p), pick(q)])).sum())
        },
        spec,
    )?;
    let est = est.scale(-1.0 / (8.0 * PI.powi(3)));
    Ok(CoefficientResult::new(
        est.value,
        est.error_estimate,
        Method::GreenTensorPlanewave,
        mode,
        2,
    ))
}

/// Terms reported by [`three_body_axial_coefficient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThreeBodyTerm {
    Single(TripleTerm),
    /// All eight terms of one trace: `Tr[G12 G23 G31]`.
    HalfSum,
    /// Both traces, `Tr[G12 G23 G31] + Tr[G13 G21 G32]`.
    Total,
}

impl ThreeBodyTerm {
    pub fn name(&self) -> &'static str {
        match self {
            ThreeBodyTerm::Single(t) => t.name(),
            ThreeBodyTerm::HalfSum => "half_sum",
            ThreeBodyTerm::Total => "total",
        }
    }

    pub fn all() -> Vec<ThreeBodyTerm> {
        TripleTerm::ALL
            .iter()
            .map(|&t| ThreeBodyTerm::Single(t))
            .chain([ThreeBodyTerm::HalfSum, ThreeBodyTerm::Total])
            .collect()
    }

    fn mode(&self) -> Mode {
        match self {
            ThreeBodyTerm::Single(TripleTerm::Eee) => Mode::Te,
            ThreeBodyTerm::Single(TripleTerm::Hhh) => Mode::Tm,
            ThreeBodyTerm::Single(_) => Mode::CrossTeTm,
            _ => Mode::Total,
        }
    }
}

/// The standard collinear configuration: spacing `R/2` with `R = 1`.
pub fn collinear_system() -> AtomSystem {
    AtomSystem::on_axis(&[0.0, 0.5, 1.0]).expect("valid collinear geometry")
}

/// Three-body coefficient (`V = value / (pi (4 pi)^3 R^10)`, `R` the largest
/// separation) for three atoms on the z-axis, per trace term.
///
/// The factors of `Tr[G12 G23 G31]` are taken in the order
/// (`G12`, `G23`, `G31`) = (unprimed, primed, double-primed).
pub fn three_body_axial_coefficient(
    system: &AtomSystem,
    term: ThreeBodyTerm,
    spec: &QuadratureSpec,
) -> Result<CoefficientResult> {
    if system.len() != 3 {
        return Err(CasimirError::InvalidGeometry(format!(
            "three-body coefficient needs 3 atoms, got {}",
            system.len()
        )));
    }
    if !system.is_on_z_axis(1e-12) {
        return Err(CasimirError::InvalidGeometry(
            "plane-wave three-body evaluation requires atoms on the z-axis".into(),
        ));
    }
    let system = nondimensionalize(system)?;
    let zs = [system.distance(0, 1), system.distance(1, 2), system.distance(2, 0)];
    let terms: Vec<TripleTerm> = match term {
        ThreeBodyTerm::Single(t) => vec![t],
        _ => TripleTerm::ALL.to_vec(),
    };
    let inner = inner_spec(spec);
    let est = integrate_nested(
        |s| {
            let mut factors = [[[0.0; 3]; 2]; 3];
            for (j, &z) in zs.iter().enumerate() {
                factors[j][0] = axial_factor(Polarization::Te, s, z, &inner)?;
                factors[j][1] = axial_factor(Polarization::Tm, s, z, &inner)?;
            }
            Ok(terms
                .iter()
                .map(|t| {
                    let pols = t.polarizations();
                    let diags: Vec<[f64; 3]> = (0..3)
                        .map(|j| factors[j][usize::from(pols[j] == Polarization::Tm)])
                        .collect();
                    angular_trace(&diags)
                })
                .sum())
        },
        spec,
    )?;
    // -(1/2pi) (-1/8pi^2)^3 converted to units of 1/(pi (4pi)^3 R^10)
    let mut est = est.scale(1.0 / (16.0 * PI.powi(3)));
    if term == ThreeBodyTerm::Total {
        // the reversed trace Tr[G13 G21 G32] has the same factors transposed
        est = est.scale(2.0);
    }
    Ok(CoefficientResult::new(
        est.value,
        est.error_estimate,
        Method::GreenTensorPlanewave,
        term.mode(),
        3,
    ))
}

/// [`three_body_axial_coefficient`] on the standard collinear configuration.
pub fn three_body_collinear_coefficient(term: ThreeBodyTerm, spec: &QuadratureSpec) -> Result<CoefficientResult> {
    three_body_axial_coefficient(&collinear_system(), term, spec)
}
