//! The correlation `D_N` by each route.
//!
//! Below `T_c`:
//!
//! * exponential: `S_inf exp(sum_{n<=n_max} F^(2n)_N)`
//! * form factor: `S_inf sum_{n<=n_max} f^(2n)_N`
//!
//! Above `T_c`:
//!
//! * exponential: `S^_inf (sum_{m<=n_max} G^(2m+1)_N) exp(sum_{n<=n_max} F^^(2n)_{N+1})`
//! * form factor: `S^_inf sum_{n<=n_max} f^(2n+1)_N`
//!
//! The above-`T_c` prefactor is `+S^_inf`. With the symbol branch fixed so
//! that `(-1)^N det B_N -> S^_inf`, this is the sign that reproduces
//! `det A_N` (see `docs/conventions.md`).
//!
//! `est_error` is a heuristic: the size of the last included term scaled by
//! the prefactor, plus the propagated coarse-grid estimates of every term.

use super::{ExpansionContext, ExpansionTerm, Method};
use crate::error::{CorrError, Result};
use crate::kernels::{s_hat_infinity, s_infinity};
use crate::params::Regime;

/// Largest expansion index accepted by [`ExpansionContext::correlation`].
pub const MAX_N_MAX: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    Determinant,
    Exponential,
    FormFactor,
}

impl Route {
    pub fn short_name(&self) -> &'static str {
        match self {
            Route::Determinant => "det",
            Route::Exponential => "exp",
            Route::FormFactor => "ff",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonEntry {
    pub n_sep: usize,
    pub route: Route,
    pub value: f64,
    pub est_error: f64,
    pub n_max: usize,
    pub terms: Vec<ExpansionTerm>,
}

impl ExpansionContext {
    pub fn correlation(&self, n_sep: usize, route: Route, n_max: usize) -> Result<ComparisonEntry> {
        if n_max > MAX_N_MAX {
            return Err(CorrError::InvalidArgument(format!("n_max {n_max} above {MAX_N_MAX}")));
        }
        let entry = |value: f64, est_error: f64, terms: Vec<ExpansionTerm>| ComparisonEntry {
            n_sep,
            route,
            value,
            est_error,
            n_max,
            terms,
        };
        let regime = self.params().regime();
        match (route, regime) {
            (Route::Determinant, _) => {
                let d = self.oracle()?.det_dn(n_sep)?;
                Ok(entry(d.value, d.imag_residue, Vec::new()))
            }
            (Route::Exponential, Regime::Below) => {
                let s = s_infinity(self.params())?;
                let terms = (1..=n_max).map(|n| self.big_f(n_sep, n, false)).collect::<Result<Vec<_>>>()?;
                let value = s * terms.iter().map(|t| t.value).sum::<f64>().exp();
                let last = terms.last().map_or(0.0, |t| t.value.abs());
                let quad: f64 = terms.iter().map(|t| t.est_error).sum();
                Ok(entry(value, value.abs() * (last + quad), terms))
            }
            (Route::FormFactor, Regime::Below) => {
                let s = s_infinity(self.params())?;
                let terms = (0..=n_max)
                    .map(|n| self.f_even(n_sep, n, false, Method::EigenSymmetric))
                    .collect::<Result<Vec<_>>>()?;
                let sum: f64 = terms.iter().map(|t| t.value).sum();
                let last = if n_max == 0 { 0.0 } else { terms[n_max].value.abs() };
                let quad: f64 = terms.iter().map(|t| t.est_error).sum();
                Ok(entry(s * sum, s * (last + quad), terms))
            }
            (Route::Exponential, Regime::Above) => {
                let s = s_hat_infinity(self.params())?;
                let gs = (0..=n_max).map(|m| self.g(n_sep, m)).collect::<Result<Vec<_>>>()?;
                let fs = (1..=n_max).map(|n| self.big_f(n_sep + 1, n, true)).collect::<Result<Vec<_>>>()?;
                let g_sum: f64 = gs.iter().map(|t| t.value).sum();
                let expo = fs.iter().map(|t| t.value).sum::<f64>().exp();
                let value = s * g_sum * expo;
                let g_last = if n_max == 0 { 0.0 } else { gs[n_max].value.abs() };
                let f_last = fs.last().map_or(0.0, |t| t.value.abs());
                let g_quad: f64 = gs.iter().map(|t| t.est_error).sum();
                let f_quad: f64 = fs.iter().map(|t| t.est_error).sum();
                let est = s * expo * (g_last + g_quad) + value.abs() * (f_last + f_quad);
                Ok(entry(value, est, gs.into_iter().chain(fs).collect()))
            }
            (Route::FormFactor, Regime::Above) => {
                let s = s_hat_infinity(self.params())?;
                let terms = (0..=n_max)
                    .map(|n| self.f_odd(n_sep, n, Method::Combination))
                    .collect::<Result<Vec<_>>>()?;
                let sum: f64 = terms.iter().map(|t| t.value).sum();
                let last = if n_max == 0 { 0.0 } else { terms[n_max].value.abs() };
                let quad: f64 = terms.iter().map(|t| t.est_error).sum();
                Ok(entry(s * sum, s * (last + quad), terms))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;
    use crate::quadrature::Radius;

    #[test]
    fn degenerate_symbol_gives_one() {
        let c = ExpansionContext::with_nodes(ModelParams::degenerate(0.1).unwrap(), 64, Radius::Auto).unwrap();
        for route in [Route::Determinant, Route::Exponential, Route::FormFactor] {
            let e = c.correlation(3, route, 2).unwrap();
            assert!((e.value - 1.0).abs() < 1e-13, "{route:?}");
        }
    }

    #[test]
    fn below_exponential_matches_determinant() {
        let c = ExpansionContext::with_nodes(ModelParams::direct(0.0, 0.5).unwrap(), 64, Radius::Auto).unwrap();
        let det = c.correlation(3, Route::Determinant, 0).unwrap().value;
        let exp = c.correlation(3, Route::Exponential, 2).unwrap();
        assert!((exp.value - det).abs() < 1e-8);
        assert!(exp.est_error >= 0.0);
    }

    #[test]
    fn above_form_factor_matches_determinant() {
        let c = ExpansionContext::with_nodes(ModelParams::direct(0.0, 2.5).unwrap(), 64, Radius::Auto).unwrap();
        let det = c.correlation(3, Route::Determinant, 0).unwrap().value;
        let ff = c.correlation(3, Route::FormFactor, 2).unwrap();
        assert!((ff.value - det).abs() < 1e-6, "{} {det}", ff.value);
        assert!(c.correlation(3, Route::FormFactor, 4).is_err());
    }
}
