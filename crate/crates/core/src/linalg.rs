//! Dense complex linear algebra, backed by nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{CorrError, Result};

type C64 = Complex64;

pub type CMatrix = DMatrix<C64>;

/// Determinant by LU with partial pivoting.
pub fn determinant(a: &CMatrix) -> Result<C64> {
    let d = a.clone().lu().determinant();
    if !(d.re.is_finite() && d.im.is_finite()) {
        return Err(CorrError::NonFinite("determinant"));
    }
    if d.norm() == 0.0 {
        return Err(CorrError::SingularMatrix);
    }
    Ok(d)
}

pub fn solve(a: &CMatrix, rhs: &[C64]) -> Result<Vec<C64>> {
    let b = DVector::from_column_slice(rhs);
    let x = a.clone().lu().solve(&b).ok_or(CorrError::SingularMatrix)?;
    if x.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(CorrError::SingularMatrix);
    }
    Ok(x.iter().copied().collect())
}

/// Eigenvalues of a general complex matrix, via faer's Hessenberg QR.
///
/// Kernel matrices on coarse grids carry a cluster of aliasing eigenvalues
/// of equal modulus arranged like the spectrum of a scaled cyclic shift; a
/// QR iteration without exceptional shifts stalls on it, which is why this
/// does not go through nalgebra's Schur form.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    if a.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(CorrError::NonFinite("eigenvalue input"));
    }
    let m = faer::Mat::<C64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    m.eigenvalues()
        .map_err(|e| CorrError::MethodUnavailable(format!("eigenvalue iteration failed: {e:?}")))
}
