use thiserror::Error;

use crate::params::Regime;

pub type Result<T> = std::result::Result<T, CorrError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorrError {
    #[error("couplings must be finite and positive (K1={k1}, K2={k2})")]
    InvalidCoupling { k1: f64, k2: f64 },

    #[error("critical point: alpha2={alpha2} is within 1e-12 of 1")]
    CriticalPoint { alpha2: f64 },

    #[error("invalid alphas (alpha1={alpha1}, alpha2={alpha2}): need 0 <= alpha1 < min(alpha2, 1) and alpha2 != 1")]
    InvalidAlphas { alpha1: f64, alpha2: f64 },

    #[error("point z={re}{im:+}i lies outside the analyticity annulus of the kernel branch")]
    BranchViolation { re: f64, im: f64 },

    #[error("operation requires regime {expected:?}, parameters are in regime {found:?}")]
    RegimeMismatch { expected: Regime, found: Regime },

    #[error("node count {0} must be a power of two and at least 8")]
    InvalidNodeCount(usize),

    #[error("contour radius {r} outside the admissible interval ({min}, {max})")]
    RadiusOutOfRange { r: f64, min: f64, max: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("pole of 1/(1 - z z') on the quadrature grid")]
    PoleOnGrid,

    #[error("no convergence up to M={m_used}: best value {best}, estimated error {est_error:e}")]
    NoConvergence { best: f64, est_error: f64, m_used: usize },

    #[error("singular matrix")]
    SingularMatrix,

    #[error("method unavailable: {0}")]
    MethodUnavailable(String),

    #[error("spectral radius {0} of the kernel matrix is not below 1")]
    SpectralRadiusExceeded(f64),

    #[error("degenerate points: {0}")]
    DegeneratePoints(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
