//! Physical parameters and the maps from couplings to the symbol parameters
//! `(alpha1, alpha2)`.
//!
//! Two correlations share the same Toeplitz machinery:
//!
//! * diagonal `<s(0,0) s(N,N)>`: `alpha1 = 0`, `alpha2 = 1 / (sinh 2K1 sinh 2K2)`
//! * row `<s(0,0) s(0,N)>`: `alpha1 = e^{-2K2} tanh K1`, `alpha2 = e^{-2K2} coth K1`
//!
//! The temperature regime is read off `alpha2` alone: below the critical
//! point `alpha2 < 1`, above it `alpha2 > 1`.

use std::fmt;

use crate::error::{CorrError, Result};

/// Distance from `alpha2 = 1` below which parameters are treated as critical.
pub const CRITICAL_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrelationKind {
    Diagonal,
    Row,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `alpha2 < 1`, low temperature.
    Below,
    /// `alpha2 > 1`, high temperature.
    Above,
}

impl Regime {
    pub fn of_alpha2(alpha2: f64) -> Regime {
        if alpha2 < 1.0 {
            Regime::Below
        } else {
            Regime::Above
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    kind: CorrelationKind,
    k1: Option<f64>,
    k2: Option<f64>,
    alpha1: f64,
    alpha2: f64,
    degenerate: bool,
}

impl ModelParams {
    /// Builds parameters from dimensionless couplings `K_j = E_j / kT`.
    pub fn from_couplings(kind: CorrelationKind, k1: f64, k2: f64) -> Result<ModelParams> {
        if !(k1.is_finite() && k2.is_finite() && k1 > 0.0 && k2 > 0.0) {
            return Err(CorrError::InvalidCoupling { k1, k2 });
        }
        let (alpha1, alpha2) = match kind {
            CorrelationKind::Diagonal => (0.0, 1.0 / ((2.0 * k1).sinh() * (2.0 * k2).sinh())),
            CorrelationKind::Row => {
                let damp = (-2.0 * k2).exp();
                (damp * k1.tanh(), damp / k1.tanh())
            }
            CorrelationKind::Direct => {
                return Err(CorrError::InvalidArgument(
                    "couplings cannot be used with the direct kind".into(),
                ))
            }
        };
        check_critical(alpha2)?;
        Ok(ModelParams { kind, k1: Some(k1), k2: Some(k2), alpha1, alpha2, degenerate: false })
    }

    /// Diagonal correlation specified by `alpha2` alone, with symmetric
    /// couplings `K1 = K2 = asinh(alpha2^{-1/2}) / 2` recorded for reporting.
    pub fn diagonal_from_alpha2(alpha2: f64) -> Result<ModelParams> {
        if !(alpha2.is_finite() && alpha2 > 0.0) {
            return Err(CorrError::InvalidAlphas { alpha1: 0.0, alpha2 });
        }
        check_critical(alpha2)?;
        let k = 0.5 * (1.0 / alpha2.sqrt()).asinh();
        Ok(ModelParams {
            kind: CorrelationKind::Diagonal,
            k1: Some(k),
            k2: Some(k),
            alpha1: 0.0,
            alpha2,
            degenerate: false,
        })
    }

    /// Symbol parameters given directly; requires `0 <= alpha1 < min(alpha2, 1)`.
    pub fn direct(alpha1: f64, alpha2: f64) -> Result<ModelParams> {
        if alpha2.is_finite() {
            check_critical(alpha2)?;
        }
        let ok = alpha1.is_finite()
            && alpha2.is_finite()
            && alpha1 >= 0.0
            && alpha1 < alpha2.min(1.0)
            && (alpha2 - 1.0).abs() >= CRITICAL_CUTOFF;
        if !ok {
            return Err(CorrError::InvalidAlphas { alpha1, alpha2 });
        }
        Ok(ModelParams {
            kind: CorrelationKind::Direct,
            k1: None,
            k2: None,
            alpha1,
            alpha2,
            degenerate: false,
        })
    }

    /// `alpha1 = alpha2 = alpha < 1`: the symbol is identically one. Only
    /// meant for tests of the numerical machinery.
    pub fn degenerate(alpha: f64) -> Result<ModelParams> {
        if !(alpha.is_finite() && (0.0..1.0).contains(&alpha)) {
            return Err(CorrError::InvalidAlphas { alpha1: alpha, alpha2: alpha });
        }
        Ok(ModelParams {
            kind: CorrelationKind::Direct,
            k1: None,
            k2: None,
            alpha1: alpha,
            alpha2: alpha,
            degenerate: true,
        })
    }

    pub fn kind(&self) -> CorrelationKind {
        self.kind
    }

    pub fn k1(&self) -> Option<f64> {
        self.k1
    }

    pub fn k2(&self) -> Option<f64> {
        self.k2
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// `t = alpha2^2`, reported for the diagonal correlation only.
    pub fn t(&self) -> Option<f64> {
        match self.kind {
            CorrelationKind::Diagonal => Some(self.alpha2 * self.alpha2),
            _ => None,
        }
    }

    pub fn regime(&self) -> Regime {
        Regime::of_alpha2(self.alpha2)
    }

    pub fn require(&self, regime: Regime) -> Result<()> {
        if self.regime() == regime {
            Ok(())
        } else {
            Err(CorrError::RegimeMismatch { expected: regime, found: self.regime() })
        }
    }

    /// Inner radius of the annulus on which every chain weight is analytic.
    pub fn inner_radius(&self) -> f64 {
        match self.regime() {
            Regime::Below => self.alpha2,
            Regime::Above => self.alpha1.max(1.0 / self.alpha2),
        }
    }
}

fn check_critical(alpha2: f64) -> Result<()> {
    if (alpha2 - 1.0).abs() < CRITICAL_CUTOFF {
        Err(CorrError::CriticalPoint { alpha2 })
    } else {
        Ok(())
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            CorrelationKind::Diagonal => "diagonal",
            CorrelationKind::Row => "row",
            CorrelationKind::Direct => "direct",
        };
        write!(f, "kind={kind};alpha1={};alpha2={}", self.alpha1, self.alpha2)?;
        if let (Some(k1), Some(k2)) = (self.k1, self.k2) {
            write!(f, ";K1={k1};K2={k2}")?;
        }
        if let Some(t) = self.t() {
            write!(f, ";t={t}")?;
        }
        Ok(())
    }
}
