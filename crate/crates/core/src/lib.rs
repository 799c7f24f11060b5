//! Spin-spin correlations of the two-dimensional Ising model from Toeplitz
//! determinants, exponential expansions and form factor expansions.

pub mod error;
pub mod expansions;
pub mod fredholm;
pub mod kernels;
pub mod linalg;
pub mod par;
pub mod params;
pub mod quadrature;
pub mod toeplitz;

pub use error::{CorrError, Result};
pub use params::{CorrelationKind, ModelParams, Regime};
pub use expansions::{ComparisonEntry, ExpansionContext, ExpansionTerm, Method, Route};
pub use quadrature::{ContourGrid, Radius};
