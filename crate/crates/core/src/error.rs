use thiserror::Error;

use crate::quadrature::IntegralEstimate;

pub type Result<T, E = CasimirError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CasimirError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Time arguments outside the open interval a bridge density is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// The TE unit vector is undefined for wave vectors along the z-axis.
    #[error("on-axis singularity: transverse wave number is zero")]
    OnAxisSingularity,

    #[error("singular point: {0}")]
    Singularity(String),

    #[error("integrand returned a non-finite value at {point:?}")]
    IntegrandEvaluation { point: Vec<f64> },

    #[error(
        "quadrature did not converge after {levels} levels (best {:.17e} +/- {:.3e})",
        best.value,
        best.error_estimate
    )]
    NotConverged { best: IntegralEstimate, levels: usize },

    #[error("pinned times collide on the time grid: {0}")]
    GridResolution(String),

    #[error("non-finite field value at path node {node}")]
    FieldEvaluation { node: usize },
}

impl CasimirError {
    /// Best partial estimate carried by a numerical failure, if any.
    pub fn best_estimate(&self) -> Option<&IntegralEstimate> {
        match self {
            CasimirError::NotConverged { best, .. } => Some(best),
            _ => None,
        }
    }
}
