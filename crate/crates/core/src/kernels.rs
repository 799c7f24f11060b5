//! Toeplitz symbols and their Wiener-Hopf factors.
//!
//! Every square root is taken factor by factor, `(1 - c z)^{1/2}` with the
//! principal branch, and only where `|c z| < 1`. Inside that disc the
//! argument has positive real part, so no cut is ever crossed and the
//! products below are analytic on the annuli where they are evaluated.
//!
//! Below the critical point
//!
//! ```text
//! P(z) = ((1 - a2 z) / (1 - a1 z))^{1/2},   Q = 1 / P,
//! phi(z) = 1 / (P(z) Q(1/z)).
//! ```
//!
//! Above it
//!
//! ```text
//! Phat(z) = ((1 - a1 z)(1 - z / a2))^{-1/2},   Qhat = 1 / Phat,
//! phi1(z) = -1 / (Phat(z) Qhat(1/z)),   phi(z) = phi1(z) / z.
//! ```
//!
//! The overall minus sign in `phi1` selects the branch for which
//! `(-1)^N det B_N` tends to the positive limit `Shat_inf` and `det A_N` is
//! the spin correlation itself (positive at high temperature).

use num_complex::Complex64;

use crate::error::{CorrError, Result};
use crate::params::{ModelParams, Regime};

type C64 = Complex64;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// `(1 - c z)^{1/2}` on the disc `|c z| < 1`.
fn sqrt_factor(c: f64, z: C64) -> Result<C64> {
    let cz = z * c;
    if cz.norm() >= 1.0 {
        return Err(CorrError::BranchViolation { re: z.re, im: z.im });
    }
    Ok((ONE - cz).sqrt())
}

fn recip(z: C64) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(CorrError::BranchViolation { re: 0.0, im: 0.0 });
    }
    Ok(z.inv())
}

/// Evaluators for the symbol and its factors at fixed parameters.
#[derive(Debug, Clone, Copy)]
pub struct KernelSet {
    params: ModelParams,
}

impl KernelSet {
    pub fn new(params: ModelParams) -> KernelSet {
        KernelSet { params }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn p(&self, z: C64) -> Result<C64> {
        Ok(sqrt_factor(self.params.alpha2(), z)? / sqrt_factor(self.params.alpha1(), z)?)
    }

    pub fn q(&self, z: C64) -> Result<C64> {
        Ok(sqrt_factor(self.params.alpha1(), z)? / sqrt_factor(self.params.alpha2(), z)?)
    }

    pub fn p_hat(&self, z: C64) -> Result<C64> {
        let s = sqrt_factor(self.params.alpha1(), z)? * sqrt_factor(1.0 / self.params.alpha2(), z)?;
        Ok(s.inv())
    }

    pub fn q_hat(&self, z: C64) -> Result<C64> {
        Ok(sqrt_factor(self.params.alpha1(), z)? * sqrt_factor(1.0 / self.params.alpha2(), z)?)
    }

    /// The Toeplitz symbol `phi`, whose Fourier coefficients fill `A_N`.
    pub fn phi(&self, z: C64) -> Result<C64> {
        match self.params.regime() {
            Regime::Below => {
                let w = recip(z)?;
                Ok((self.p(z)? * self.q(w)?).inv())
            }
            Regime::Above => Ok(self.phi1(z)? / z),
        }
    }

    /// The shifted symbol `phi1(z) = z phi(z)`.
    pub fn phi1(&self, z: C64) -> Result<C64> {
        match self.params.regime() {
            Regime::Below => Ok(self.phi(z)? * z),
            Regime::Above => {
                let w = recip(z)?;
                Ok(-(self.p_hat(z)? * self.q_hat(w)?).inv())
            }
        }
    }

    /// `P(z) P(1/z)` below, `Phat(z) Phat(1/z)` above.
    pub fn pp(&self, z: C64) -> Result<C64> {
        let w = recip(z)?;
        match self.params.regime() {
            Regime::Below => Ok(self.p(z)? * self.p(w)?),
            Regime::Above => Ok(self.p_hat(z)? * self.p_hat(w)?),
        }
    }

    /// `Q(z) Q(1/z)` below, `Qhat(z) Qhat(1/z)` above.
    pub fn qq(&self, z: C64) -> Result<C64> {
        let w = recip(z)?;
        match self.params.regime() {
            Regime::Below => Ok(self.q(z)? * self.q(w)?),
            Regime::Above => Ok(self.q_hat(z)? * self.q_hat(w)?),
        }
    }
}

/// Szegő limit below the critical point,
/// `[(1 - a1^2)(1 - a2^2) / (1 - a1 a2)^2]^{1/4}`.
pub fn s_infinity(params: &ModelParams) -> Result<f64> {
    params.require(Regime::Below)?;
    let (a1, a2) = (params.alpha1(), params.alpha2());
    Ok(((1.0 - a1 * a1) * (1.0 - a2 * a2) / (1.0 - a1 * a2).powi(2)).powf(0.25))
}

/// Szegő limit above the critical point,
/// `[(1 - a1^2)(1 - a2^{-2})(1 - a1/a2)^2]^{1/4}`.
pub fn s_hat_infinity(params: &ModelParams) -> Result<f64> {
    params.require(Regime::Above)?;
    let (a1, a2) = (params.alpha1(), params.alpha2());
    Ok(((1.0 - a1 * a1) * (1.0 - 1.0 / (a2 * a2)) * (1.0 - a1 / a2).powi(2)).powf(0.25))
}
