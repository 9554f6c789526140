//! Closed-form free-space Green tensor at imaginary frequency, and the
//! one-dimensional frequency integrals built from it.

use std::f64::consts::PI;

use crate::error::{CasimirError, Result};
use crate::linalg::{self, Mat3, Vec3};
use crate::quadrature::{integrate_semi_infinite, QuadratureSpec};
use crate::system::{nondimensionalize, AtomSystem, CoefficientResult, Method, Mode};

/// `G(r1, r2, i s)`, the field at `r1` of a unit dipole at `r2`:
///
/// ```text
/// G = e^{-x} / (4 pi r^3) [ (3 + 3x + x^2) r_hat r_hat - (1 + x + x^2) I ],  x = s r
/// ```
pub fn position_space_green(r1: Vec3, r2: Vec3, s: f64) -> Result<Mat3> {
    let d = linalg::sub(r1, r2);
    let r = linalg::norm(d);
    if r == 0.0 {
        return Err(CasimirError::Singularity("Green tensor evaluated at coincident points".into()));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(CasimirError::InvalidParameter(format!("imaginary frequency must be >= 0, got {s}")));
    }
    let x = s * r;
    let pre = (-x).exp() / (4.0 * PI * r * r * r);
    let radial = pre * (3.0 + 3.0 * x + x * x);
    let iso = pre * (1.0 + x + x * x);
    let u = linalg::scale(d, 1.0 / r);
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = radial * u[i] * u[j] - if i == j { iso } else { 0.0 };
        }
    }
    Ok(g)
}

pub fn default_spec() -> QuadratureSpec {
    QuadratureSpec::uniform(crate::quadrature::AxisRule::DoubleExponential, 16, 1e-12, 9)
}

/// Total two-body coefficient from `-(1/2 pi) int ds Tr[G12 G21]`.
pub fn two_body_total_oracle(system: &AtomSystem, spec: &QuadratureSpec) -> Result<CoefficientResult> {
    if system.len() != 2 {
        return Err(CasimirError::InvalidGeometry(format!(
            "two-body coefficient needs 2 atoms, got {}",
            system.len()
        )));
    }
    let sys = nondimensionalize(system)?;
    let [a, b] = [sys.positions()[0], sys.positions()[1]];
    let est = integrate_semi_infinite(
        |x| {
            let g12 = position_space_green(a, b, x[0]).unwrap();
            let g21 = position_space_green(b, a, x[0]).unwrap();
            linalg::trace(&linalg::mat_mul(&g12, &g21))
        },
        1,
        spec,
    )?
    .scale(-8.0 * PI);
    Ok(CoefficientResult::new(
        est.value,
        est.error_estimate,
        Method::GreenTensorOracle,
        Mode::Total,
        2,
    ))
}

/// `Tr[G_ab G_bc G_ca]` at imaginary frequency `s`.
pub fn cyclic_trace(a: Vec3, b: Vec3, c: Vec3, s: f64) -> Result<f64> {
    let gab = position_space_green(a, b, s)?;
    let gbc = position_space_green(b, c, s)?;
    let gca = position_space_green(c, a, s)?;
    Ok(linalg::trace(&linalg::mat_mul(&linalg::mat_mul(&gab, &gbc), &gca)))
}

/// Total three-body coefficient for any geometry, in units of
/// `alpha1 alpha2 alpha3 / (pi (4 pi)^3 R^10)` with `R` the largest
/// separation.
///
/// The two distinct cyclic traces `Tr[G12 G23 G31]` and `Tr[G13 G21 G32]`
/// are transposes of each other; that is checked at a probe frequency and the
/// first is integrated and doubled.
pub fn three_body_total_general(system: &AtomSystem, spec: &QuadratureSpec) -> Result<CoefficientResult> {
    if system.len() != 3 {
        return Err(CasimirError::InvalidGeometry(format!(
            "three-body coefficient needs 3 atoms, got {}",
            system.len()
        )));
    }
    let sys = nondimensionalize(system)?;
    let [a, b, c] = [sys.positions()[0], sys.positions()[1], sys.positions()[2]];
    for probe in [0.0, 0.7, 3.0] {
        let t1 = cyclic_trace(a, b, c, probe)?;
        let t2 = cyclic_trace(a, c, b, probe)?;
        if (t1 - t2).abs() > 1e-10 * t1.abs().max(t2.abs()) {
            return Err(CasimirError::Domain(format!(
                "cyclic traces differ at s = {probe}: {t1} vs {t2}"
            )));
        }
    }
    let est = integrate_semi_infinite(|x| cyclic_trace(a, b, c, x[0]).unwrap(), 1, spec)?;
    // -(1/2 pi) * 2 * int Tr, expressed in units of 1/(pi (4 pi)^3)
    let est = est.scale(-(4.0 * PI).powi(3));
    Ok(CoefficientResult::new(
        est.value,
        est.error_estimate,
        Method::GreenTensorOracle,
        Mode::Total,
        3,
    ))
}
