//! Scalar worldline formalism in vacuum: TE and TM modes as independent
//! scalar fields whose loops are pinned at the atoms.

pub mod coefficient;
pub mod density;
pub mod laplacian;

pub use coefficient::{
    all_assignments, assignment_energies, n_body_te_integrand, n_body_tm_integrand, order_prefactor, scalar_sum_fixed_base,
    te_three_body_coefficient, te_two_body_coefficient, three_body_coefficient, tm_three_body_coefficient,
    tm_two_body_coefficient, two_body_coefficient, AssignmentConvention,
};
pub use density::{bridge_density, bridge_variance, conditional_density, conditional_moments, BridgePinning, ChainFactor, GaussianChainDensity};
pub use laplacian::{gaussian_laplacian, laplacian_expansion, odd_double_factorial, LaplacianExpansion, LaplacianTerm};
