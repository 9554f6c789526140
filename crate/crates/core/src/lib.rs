//! Retarded Casimir-Polder interaction coefficients between neutral atoms,
//! computed two ways: scalar worldline path integrals (TE and TM modes
//! treated as independent scalar fields) and the exact Green-tensor
//! scattering expansion.
//!
//! Everything is in natural units (`hbar = c = eps0 = 1`) at unit reference
//! separation; see [`system::Convention`] for how coefficients map back to
//! energies.

pub mod bridge_mc;
pub mod cli;
pub mod error;
pub mod green_tensor;
pub mod linalg;
pub mod quadrature;
pub mod sweep;
pub mod system;
pub mod worldline;

pub use error::{CasimirError, Result};
pub use system::{AtomSystem, CoefficientResult, Convention, DimensionConfig, Method, Mode};
