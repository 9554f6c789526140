//! Closed-form traces of TE/TM projector products.
//!
//! For rank-one projectors `A = u u`, `Tr(A B^T) = (u.v)^2` and
//! `Tr(A B C) = (u.v)(v.w)(w.u)`, so every trace reduces to products of the
//! four unit-vector overlaps below.

use num_complex::Complex64;

use super::projector::{Polarization, ProjectorPair, WaveVector};
use crate::error::{CasimirError, Result};
use crate::linalg::{self, Mat3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairTrace {
    /// `Tr(A_e A_e'^T)`
    Ee,
    /// `Tr(A_h A_h'^T)`
    Hh,
    /// `Tr(A_h A_e'^T)`
    He,
    /// `Tr(A_e A_h'^T)`
    Eh,
}

impl PairTrace {
    pub const ALL: [PairTrace; 4] = [PairTrace::Ee, PairTrace::Hh, PairTrace::He, PairTrace::Eh];

    pub fn polarizations(&self) -> [Polarization; 2] {
        use Polarization::{Te, Tm};
        match self {
            PairTrace::Ee => [Te, Te],
            PairTrace::Hh => [Tm, Tm],
            PairTrace::He => [Tm, Te],
            PairTrace::Eh => [Te, Tm],
        }
    }
}

/// The eight terms of the three-factor trace `Tr[(A_e + A_h)(A_e' + A_h')(A_e'' + A_h'')]`.
///
/// The mixed terms are numbered by which factors carry a TM projector:
/// 1-3 have a single TM factor (unprimed, primed, double-primed), 4-6 have
/// two (unprimed+primed, unprimed+double-primed, primed+double-primed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TripleTerm {
    Eee,
    Hhh,
    Mix1,
    Mix2,
    Mix3,
    Mix4,
    Mix5,
    Mix6,
}

impl TripleTerm {
    pub const ALL: [TripleTerm; 8] = [
        TripleTerm::Eee,
        TripleTerm::Hhh,
        TripleTerm::Mix1,
        TripleTerm::Mix2,
        TripleTerm::Mix3,
        TripleTerm::Mix4,
        TripleTerm::Mix5,
        TripleTerm::Mix6,
    ];

    pub fn polarizations(&self) -> [Polarization; 3] {
        use Polarization::{Te as E, Tm as H};
        match self {
            TripleTerm::Eee => [E, E, E],
            TripleTerm::Hhh => [H, H, H],
            TripleTerm::Mix1 => [H, E, E],
            TripleTerm::Mix2 => [E, H, E],
            TripleTerm::Mix3 => [E, E, H],
            TripleTerm::Mix4 => [H, H, E],
            TripleTerm::Mix5 => [H, E, H],
            TripleTerm::Mix6 => [E, H, H],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TripleTerm::Eee => "eee",
            TripleTerm::Hhh => "hhh",
            TripleTerm::Mix1 => "mix1",
            TripleTerm::Mix2 => "mix2",
            TripleTerm::Mix3 => "mix3",
            TripleTerm::Mix4 => "mix4",
            TripleTerm::Mix5 => "mix5",
            TripleTerm::Mix6 => "mix6",
        }
    }
}

fn check(ks: &[WaveVector]) -> Result<()> {
    if ks.iter().any(|k| k.k_rho() == 0.0) {
        return Err(CasimirError::OnAxisSingularity);
    }
    Ok(())
}

/// `e.e'`
fn ee(a: &WaveVector, b: &WaveVector) -> f64 {
    (a.kx * b.kx + a.ky * b.ky) / (a.k_rho() * b.k_rho())
}

/// `h.h'`
fn hh(a: &WaveVector, b: &WaveVector) -> f64 {
    let (ra, rb) = (a.k_rho(), b.k_rho());
    (ra * ra * rb * rb + a.kz * b.kz * (a.kx * b.kx + a.ky * b.ky)) / (a.k() * b.k() * ra * rb)
}

/// `h.e'`
fn he(a: &WaveVector, b: &WaveVector) -> f64 {
    a.kz * (b.kx * a.ky - a.kx * b.ky) / (a.k() * a.k_rho() * b.k_rho())
}

fn overlap(pa: Polarization, a: &WaveVector, pb: Polarization, b: &WaveVector) -> f64 {
    use Polarization::{Te, Tm};
    match (pa, pb) {
        (Te, Te) => ee(a, b),
        (Tm, Tm) => hh(a, b),
        (Tm, Te) => he(a, b),
        (Te, Tm) => he(b, a),
    }
}

/// Closed form of a two-projector trace.
pub fn pair_trace(k: &WaveVector, kp: &WaveVector, which: PairTrace) -> Result<f64> {
    check(&[*k, *kp])?;
    let [p, q] = which.polarizations();
    let o = overlap(p, k, q, kp);
    Ok(o * o)
}

/// Closed form of a three-projector trace `Tr(A A' A'')`.
pub fn triple_trace(k: &WaveVector, kp: &WaveVector, kpp: &WaveVector, which: TripleTerm) -> Result<f64> {
    check(&[*k, *kp, *kpp])?;
    let [p, q, r] = which.polarizations();
    Ok(overlap(p, k, q, kp) * overlap(q, kp, r, kpp) * overlap(r, kpp, p, k))
}

/// `Tr(A B^T)` by explicit matrix products.
pub fn matrix_pair_trace(a: &Mat3<Complex64>, b: &Mat3<Complex64>) -> Complex64 {
    linalg::trace(&linalg::mat_mul(a, &linalg::transpose(b)))
}

/// `Tr(A B C)` by explicit matrix products.
pub fn matrix_triple_trace(a: &Mat3<Complex64>, b: &Mat3<Complex64>, c: &Mat3<Complex64>) -> Complex64 {
    linalg::trace(&linalg::mat_mul(&linalg::mat_mul(a, b), c))
}

/// Matrix-product reference for [`pair_trace`].
pub fn pair_trace_direct(k: &WaveVector, kp: &WaveVector, which: PairTrace) -> Result<f64> {
    let (a, b) = (ProjectorPair::real(*k)?, ProjectorPair::real(*kp)?);
    let [p, q] = which.polarizations();
    Ok(matrix_pair_trace(a.get(p), b.get(q)).re)
}

/// Matrix-product reference for [`triple_trace`].
pub fn triple_trace_direct(k: &WaveVector, kp: &WaveVector, kpp: &WaveVector, which: TripleTerm) -> Result<f64> {
    let (a, b, c) = (ProjectorPair::real(*k)?, ProjectorPair::real(*kp)?, ProjectorPair::real(*kpp)?);
    let [p, q, r] = which.polarizations();
    Ok(matrix_triple_trace(a.get(p), b.get(q), c.get(r)).re)
}

/// A trace after each factor has been integrated over its own azimuth, given
/// the per-factor diagonals from
/// [`weighted_angular_projector`](super::projector::weighted_angular_projector).
pub fn angular_trace(diagonals: &[[f64; 3]]) -> f64 {
    (0..3).map(|i| diagonals.iter().map(|d| d[i]).product::<f64>()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_vectors() {
        let k = WaveVector::new(0.3, 0.8, 1.1);
        assert!((pair_trace(&k, &k, PairTrace::Ee).unwrap() - 1.0).abs() < 1e-15);
        assert!(pair_trace(&k, &k, PairTrace::He).unwrap().abs() < 1e-15);
        assert!((triple_trace(&k, &k, &k, TripleTerm::Eee).unwrap() - 1.0).abs() < 1e-15);
        assert!((triple_trace(&k, &k, &k, TripleTerm::Hhh).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn on_axis_factor_is_rejected() {
        let k = WaveVector::new(0.3, 0.8, 1.1);
        let z = WaveVector::new(0.0, 0.0, 1.0);
        assert!(pair_trace(&k, &z, PairTrace::Hh).is_err());
        assert!(triple_trace(&k, &k, &z, TripleTerm::Mix3).is_err());
    }

    #[test]
    fn closed_forms_match_matrix_products_at_a_fixed_triple() {
        let k = WaveVector::new(0.3, -0.8, 1.1);
        let kp = WaveVector::new(-1.4, 0.2, 0.5);
        let kpp = WaveVector::new(0.7, 0.9, -2.0);
        for which in PairTrace::ALL {
            let a = pair_trace(&k, &kp, which).unwrap();
            let b = pair_trace_direct(&k, &kp, which).unwrap();
            assert!((a - b).abs() < 1e-14, "{which:?}");
        }
        for which in TripleTerm::ALL {
            let a = triple_trace(&k, &kp, &kpp, which).unwrap();
            let b = triple_trace_direct(&k, &kp, &kpp, which).unwrap();
            assert!((a - b).abs() < 1e-14, "{which:?}");
        }
    }
}
