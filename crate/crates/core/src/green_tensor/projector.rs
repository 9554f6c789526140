//! TE/TM unit vectors and projector matrices relative to the z-axis.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{CasimirError, Result};
use crate::linalg::{self, Mat3, Vec3};

/// A real wave vector `(k_x, k_y, k_z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
}

impl WaveVector {
    pub fn new(kx: f64, ky: f64, kz: f64) -> Self {
        Self { kx, ky, kz }
    }

    pub fn k_rho(&self) -> f64 {
        self.kx.hypot(self.ky)
    }

    pub fn k(&self) -> f64 {
        linalg::norm(self.as_array())
    }

    pub fn as_array(&self) -> Vec3 {
        [self.kx, self.ky, self.kz]
    }
}

/// Wave vector after the rotation to imaginary frequency `k = i s`, for which
/// `k_z = i kappa` with `kappa = sqrt(s^2 + k_x^2 + k_y^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanWaveVector {
    pub s: f64,
    pub kx: f64,
    pub ky: f64,
}

impl EuclideanWaveVector {
    pub fn new(s: f64, kx: f64, ky: f64) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite() && kx.is_finite() && ky.is_finite()) {
            return Err(CasimirError::InvalidParameter(format!(
                "invalid euclidean wave vector (s={s}, kx={kx}, ky={ky})"
            )));
        }
        Ok(Self { s, kx, ky })
    }

    pub fn k_rho(&self) -> f64 {
        self.kx.hypot(self.ky)
    }

    pub fn kappa(&self) -> f64 {
        (self.s * self.s + self.kx * self.kx + self.ky * self.ky).sqrt()
    }
}

/// TE and TM unit vectors `(e_hat, h_hat)` for a real wave vector, with
/// `h_hat = e_hat x k_hat`.
pub fn unit_vectors(k: WaveVector) -> Result<(Vec3, Vec3)> {
    let k_rho = k.k_rho();
    if k_rho == 0.0 {
        return Err(CasimirError::OnAxisSingularity);
    }
    let kk = k.k();
    let e = [k.ky / k_rho, -k.kx / k_rho, 0.0];
    let h = [
        -k.kz * k.kx / (kk * k_rho),
        -k.kz * k.ky / (kk * k_rho),
        k_rho / kk,
    ];
    Ok((e, h))
}

fn outer<T: Copy + std::ops::Mul<Output = T>>(u: [T; 3]) -> Mat3<T> {
    let mut m = [[u[0]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = u[i] * u[j];
        }
    }
    m
}

/// The TE projector `A_e = e e` and TM projector `A_h = h h`.
///
/// Entries are complex so the same type covers imaginary frequency, where the
/// `xz`/`yz` entries of `A_h` are purely imaginary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorPair {
    pub a_e: Mat3<Complex64>,
    pub a_h: Mat3<Complex64>,
}

impl ProjectorPair {
    pub fn real(k: WaveVector) -> Result<Self> {
        let (e, h) = unit_vectors(k)?;
        let c = |v: Vec3| v.map(|x| Complex64::new(x, 0.0));
        Ok(Self {
            a_e: outer(c(e)),
            a_h: outer(c(h)),
        })
    }

    /// Projectors at imaginary frequency for a wave travelling towards
    /// `+z` (`upward = true`, `k_z = i kappa`) or `-z` (`k_z = -i kappa`).
    pub fn euclidean(k: EuclideanWaveVector, upward: bool) -> Result<Self> {
        let k_rho = k.k_rho();
        if k_rho == 0.0 {
            return Err(CasimirError::OnAxisSingularity);
        }
        if k.s == 0.0 {
            return Err(CasimirError::Singularity("TM projector is singular at s = 0".into()));
        }
        let sigma = if upward { 1.0 } else { -1.0 };
        let kappa = k.kappa();
        let e = [k.ky / k_rho, -k.kx / k_rho, 0.0].map(|x| Complex64::new(x, 0.0));
        // k_z / k = sigma kappa / s, k_rho / k = -i k_rho / s
        let h = [
            Complex64::new(-sigma * kappa * k.kx / (k.s * k_rho), 0.0),
            Complex64::new(-sigma * kappa * k.ky / (k.s * k_rho), 0.0),
            Complex64::new(0.0, -k_rho / k.s),
        ];
        Ok(Self {
            a_e: outer(e),
            a_h: outer(h),
        })
    }

    pub fn get(&self, pol: Polarization) -> &Mat3<Complex64> {
        match pol {
            Polarization::Te => &self.a_e,
            Polarization::Tm => &self.a_h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    Te,
    Tm,
}

/// Diagonal of `s^2 * integral_0^{2 pi} dphi A(phi)` at imaginary frequency,
/// where `phi` is the azimuth of `(k_x, k_y)`. The off-diagonal entries
/// integrate to zero, so on-axis geometries only ever need this diagonal.
pub fn weighted_angular_projector(pol: Polarization, s: f64, kappa: f64) -> [f64; 3] {
    match pol {
        Polarization::Te => [PI * s * s, PI * s * s, 0.0],
        Polarization::Tm => {
            let k_rho_sq = (kappa - s) * (kappa + s);
            [PI * kappa * kappa, PI * kappa * kappa, -2.0 * PI * k_rho_sq]
        }
    }
}
