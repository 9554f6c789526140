//! Shared domain types: atom configurations, coefficient records and the
//! dimension convention.
//!
//! Everything downstream works in natural units (hbar = c = eps0 = 1) with
//! the configuration's reference separation set to one, so coefficients are
//! read off directly instead of being fitted from a power law.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::linalg::{self, Mat3, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSystem {
    positions: Vec<Vec3>,
    polarizabilities: Vec<f64>,
    /// Length of one position unit, in the caller's original units.
    scale: f64,
    nondimensional: bool,
}

impl AtomSystem {
    pub fn new(positions: Vec<Vec3>, polarizabilities: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(CasimirError::InvalidGeometry("need at least one atom".into()));
        }
        if positions.len() != polarizabilities.len() {
            return Err(CasimirError::InvalidParameter(format!(
                "{} positions but {} polarizabilities",
                positions.len(),
                polarizabilities.len()
            )));
        }
        if let Some(p) = positions.iter().find(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(CasimirError::InvalidGeometry(format!("non-finite position {p:?}")));
        }
        if let Some(a) = polarizabilities.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(CasimirError::InvalidParameter(format!(
                "polarizability must be finite and >= 0, got {a}"
            )));
        }
        for i in 0..positions.len() {
            for j in 0..i {
                if linalg::norm(linalg::sub(positions[i], positions[j])) == 0.0 {
                    return Err(CasimirError::InvalidGeometry(format!(
                        "atoms {j} and {i} coincide at {:?}",
                        positions[i]
                    )));
                }
            }
        }
        Ok(Self {
            positions,
            polarizabilities,
            scale: 1.0,
            nondimensional: false,
        })
    }

    /// Atoms with unit polarizability.
    pub fn unit(positions: Vec<Vec3>) -> Result<Self> {
        let n = positions.len();
        Self::new(positions, vec![1.0; n])
    }

    /// Atoms on the z-axis.
    pub fn on_axis(z: &[f64]) -> Result<Self> {
        Self::unit(z.iter().map(|&z| [0.0, 0.0, z]).collect())
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn polarizabilities(&self) -> &[f64] {
        &self.polarizabilities
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_nondimensional(&self) -> bool {
        self.nondimensional
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        linalg::norm(linalg::sub(self.positions[i], self.positions[j]))
    }

    pub fn min_separation(&self) -> f64 {
        self.pair_distances().fold(f64::INFINITY, f64::min)
    }

    /// Largest pairwise distance; zero for a single atom.
    pub fn reference_separation(&self) -> f64 {
        self.pair_distances().fold(0.0, f64::max)
    }

    fn pair_distances(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| self.distance(i, j)))
    }

    /// Whether every atom lies on the z-axis (to `tol`).
    pub fn is_on_z_axis(&self, tol: f64) -> bool {
        self.positions.iter().all(|p| p[0].abs() <= tol && p[1].abs() <= tol)
    }

    pub fn translated(&self, by: Vec3) -> Self {
        self.map_positions(|p| linalg::add(p, by))
    }

    pub fn rotated(&self, rotation: &Mat3) -> Self {
        self.map_positions(|p| linalg::mat_vec(rotation, p))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map_positions(|p| linalg::scale(p, factor))
    }

    /// The same atoms in a new order: `order[i]` is the old index of new atom `i`.
    pub fn relabeled(&self, order: &[usize]) -> Self {
        Self {
            positions: order.iter().map(|&i| self.positions[i]).collect(),
            polarizabilities: order.iter().map(|&i| self.polarizabilities[i]).collect(),
            ..self.clone()
        }
    }

    fn map_positions(&self, f: impl Fn(Vec3) -> Vec3) -> Self {
        Self {
            positions: self.positions.iter().map(|&p| f(p)).collect(),
            ..self.clone()
        }
    }

    /// Rigidly move the system so that atoms `a` and `b` lie on the z-axis,
    /// with `a` at the origin and `b` on the positive side.
    pub fn aligned_to_z(&self, a: usize, b: usize) -> Self {
        let shifted = self.translated(linalg::scale(self.positions[a], -1.0));
        let dir = shifted.positions[b];
        shifted.rotated(&linalg::rotation_between(dir, [0.0, 0.0, 1.0]))
    }
}

/// Rescale positions so the reference separation (largest pairwise distance)
/// equals one. A single atom is returned unchanged with scale 1.
pub fn nondimensionalize(system: &AtomSystem) -> Result<AtomSystem> {
    if system.len() == 1 {
        return Ok(AtomSystem {
            nondimensional: true,
            ..system.clone()
        });
    }
    let reference = system.reference_separation();
    if !(reference > 0.0 && reference.is_finite()) {
        return Err(CasimirError::InvalidGeometry(format!(
            "reference separation must be positive, got {reference}"
        )));
    }
    let mut out = system.scaled(1.0 / reference);
    out.scale = system.scale * reference;
    out.nondimensional = true;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Worldline,
    GreenTensorPlanewave,
    GreenTensorOracle,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Worldline => "worldline",
            Method::GreenTensorPlanewave => "green_tensor_planewave",
            Method::GreenTensorOracle => "green_tensor_oracle",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Te,
    Tm,
    CrossTeTm,
    Total,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Te, Mode::Tm, Mode::CrossTeTm, Mode::Total];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Te => "te",
            Mode::Tm => "tm",
            Mode::CrossTeTm => "cross",
            Mode::Total => "total",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Unit in which a dimensionless coefficient is quoted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `V = value * hbar c a1 a2 / ((4 pi eps0)^2 r^7)`
    TwoBody,
    /// `V = value * hbar c a1 a2 a3 / (pi (4 pi eps0)^3 R^10)`
    ThreeBody,
}

impl Convention {
    /// Energy unit in natural units (hbar = c = eps0 = 1).
    pub fn energy_unit(&self, polarizabilities: &[f64], separation: f64) -> f64 {
        let alpha: f64 = polarizabilities.iter().product();
        match self {
            Convention::TwoBody => alpha / ((4.0 * PI).powi(2) * separation.powi(7)),
            Convention::ThreeBody => alpha / (PI * (4.0 * PI).powi(3) * separation.powi(10)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientResult {
    pub value: f64,
    pub error_estimate: f64,
    pub method: Method,
    pub mode: Mode,
    pub order: u32,
    pub convention: Convention,
}

impl CoefficientResult {
    pub fn new(value: f64, error_estimate: f64, method: Method, mode: Mode, order: u32) -> Self {
        let convention = if order == 3 {
            Convention::ThreeBody
        } else {
            Convention::TwoBody
        };
        Self {
            value,
            error_estimate: error_estimate.abs(),
            method,
            mode,
            order,
            convention,
        }
    }

    /// Physical interaction energy for the given polarizabilities and
    /// separation, in natural units.
    pub fn energy(&self, polarizabilities: &[f64], separation: f64) -> f64 {
        self.value * self.convention.energy_unit(polarizabilities, separation)
    }

    pub fn relative_error(&self) -> f64 {
        self.error_estimate / self.value.abs()
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionConfig {
    spacetime: u32,
}

impl Default for DimensionConfig {
    fn default() -> Self {
        Self { spacetime: 4 }
    }
}

impl DimensionConfig {
    pub fn new(spacetime: u32) -> Result<Self> {
        if spacetime < 2 {
            return Err(CasimirError::InvalidParameter(format!(
                "spacetime dimension must be >= 2, got {spacetime}"
            )));
        }
        Ok(Self { spacetime })
    }

    /// `D`
    pub fn spacetime(&self) -> u32 {
        self.spacetime
    }

    /// `d = D - 1`
    pub fn spatial(&self) -> u32 {
        self.spacetime - 1
    }
}
