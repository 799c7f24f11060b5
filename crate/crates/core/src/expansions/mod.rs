//! Terms of the exponential and form factor expansions.
//!
//! All terms are evaluated on one [`ContourGrid`] through the chain engine in
//! [`crate::quadrature`], which returns integrals normalised by
//! `(2 pi i)^{-L}`. With that normalisation the terms are
//!
//! * `F^(2n)_N = -(1/n) tr(K^n)`: closed chain of `2n` sites, power `N`,
//!   `QQ` on odd sites and `PP` on even sites (hatted kernels above `T_c`)
//! * `Ft^(2n)_N = F^(2n)_N - F^(2n)_{N+1}`
//! * `phi^(2n)_N`: minus the open chain of `2n` sites, power `N+1`, with an
//!   extra `1/z` on the first and last site
//! * `G^(2n+1)_N`: open chain of `2n+1` sites, power `N+1`, `P^P^` on odd
//!   and `Q^Q^` on even sites, extra `1/z` on both ends
//! * `f^(2n)_N = (-1)^n / (n!)^2 sum d_o d_e prod C^2 V(o)^2 V(e)^2`
//!
//! where `C = 1/(1 - o e)` over all odd/even pairs and `V` is the
//! Vandermonde product. `docs/conventions.md` has the derivation of the
//! signs.
//!
//! Each term is computed on the grid and again on a grid with half the
//! nodes and the same radius; the difference is reported as `est_error`.

pub mod combinatorics;
mod correlation;
pub mod identities;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

pub use correlation::{ComparisonEntry, Route, MAX_N_MAX};

use crate::error::{CorrError, Result};
use crate::fredholm::KernelMatrix;
use crate::kernels::KernelSet;
use crate::par;
use crate::params::{ModelParams, Regime};
use crate::quadrature::{chain_integral, make_grid, Chain, ContourGrid, Radius};
use crate::toeplitz::ToeplitzOracle;

type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ChainQuadrature,
    EigenSymmetric,
    Combination,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    /// `2n` or `2n+1`.
    pub order: usize,
    pub n_sep: usize,
    pub value: f64,
    /// `|v(M) - v(M/2)|`, or `|v(M)|` when the grid cannot be halved.
    pub est_error: f64,
    pub imag_residue: f64,
    pub method: Method,
}

/// Grid together with the kernel samples used by every chain.
#[derive(Debug)]
struct GridData {
    grid: ContourGrid,
    pp: Vec<C64>,
    qq: Vec<C64>,
    inv_z: Vec<C64>,
}

impl GridData {
    fn new(kernels: &KernelSet, grid: ContourGrid) -> Result<GridData> {
        let pp = grid.sample(|z| kernels.pp(z))?;
        let qq = grid.sample(|z| kernels.qq(z))?;
        let inv_z = grid.nodes().iter().map(|z| z.inv()).collect();
        Ok(GridData { grid, pp, qq, inv_z })
    }

    /// `u_k z_k^power w_k`
    fn site(&self, power: i32, w: &[C64]) -> Vec<C64> {
        self.grid
            .nodes()
            .iter()
            .zip(self.grid.weights())
            .zip(w)
            .map(|((z, u), w)| u * z.powi(power) * w)
            .collect()
    }
}

type KernelKey = (usize, usize, bool);

#[derive(Debug)]
pub struct ExpansionContext {
    params: ModelParams,
    fine: GridData,
    coarse: Option<GridData>,
    kernels: Mutex<HashMap<KernelKey, Arc<KernelMatrix>>>,
    oracle: OnceLock<ToeplitzOracle>,
}

impl ExpansionContext {
    pub fn new(params: ModelParams, grid: ContourGrid) -> Result<ExpansionContext> {
        let ks = KernelSet::new(params);
        let coarse = if grid.m() >= 16 { Some(GridData::new(&ks, grid.with_nodes(grid.m() / 2)?)?) } else { None };
        Ok(ExpansionContext {
            params,
            fine: GridData::new(&ks, grid)?,
            coarse,
            kernels: Mutex::new(HashMap::new()),
            oracle: OnceLock::new(),
        })
    }

    /// Context on the grid chosen by [`make_grid`].
    pub fn with_nodes(params: ModelParams, m: usize, radius: Radius) -> Result<ExpansionContext> {
        ExpansionContext::new(params, make_grid(&params, m, radius)?)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &ContourGrid {
        &self.fine.grid
    }

    pub fn oracle(&self) -> Result<&ToeplitzOracle> {
        if let Some(o) = self.oracle.get() {
            return Ok(o);
        }
        let o = ToeplitzOracle::new(self.params)?;
        Ok(self.oracle.get_or_init(|| o))
    }

    fn kernel(&self, g: &GridData, n_sep: usize, hat: bool) -> Result<Arc<KernelMatrix>> {
        let key = (g.grid.m(), n_sep, hat);
        if let Some(k) = self.kernels.lock().expect("kernel cache poisoned").get(&key) {
            return Ok(Arc::clone(k));
        }
        let k = Arc::new(KernelMatrix::build(&self.params, &g.grid, n_sep, hat)?);
        self.kernels.lock().expect("kernel cache poisoned").insert(key, Arc::clone(&k));
        Ok(k)
    }

    fn evaluate<F>(&self, order: usize, n_sep: usize, method: Method, f: F) -> Result<ExpansionTerm>
    where
        F: Fn(&GridData) -> Result<C64>,
    {
        let v = f(&self.fine)?;
        let est_error = match &self.coarse {
            Some(c) => (v - f(c)?).norm(),
            None => v.norm(),
        };
        Ok(ExpansionTerm { order, n_sep, value: v.re, est_error, imag_residue: v.im.abs(), method })
    }

    fn regime_for(&self, hat: bool) -> Result<()> {
        self.params.require(if hat { Regime::Above } else { Regime::Below })
    }

    fn big_f_on(&self, g: &GridData, n_sep: usize, n: usize) -> Result<C64> {
        let tr = chain_integral(&g.grid, &Chain::closed(n, n_sep as i32, &g.qq, &g.pp))?;
        Ok(-tr / n as f64)
    }

    /// `F^(2n)_N`, or the hatted `F^(2n)_N` above `T_c`.
    pub fn big_f(&self, n_sep: usize, n: usize, hat: bool) -> Result<ExpansionTerm> {
        self.regime_for(hat)?;
        require_positive(n)?;
        self.evaluate(2 * n, n_sep, Method::ChainQuadrature, |g| self.big_f_on(g, n_sep, n))
    }

    /// `Ft^(2n)_N`, the chain with the `(1 - prod z)` insertion.
    pub fn big_f_tilde(&self, n_sep: usize, n: usize) -> Result<ExpansionTerm> {
        self.regime_for(false)?;
        require_positive(n)?;
        self.evaluate(2 * n, n_sep, Method::ChainQuadrature, |g| {
            Ok(self.big_f_on(g, n_sep, n)? - self.big_f_on(g, n_sep + 1, n)?)
        })
    }

    fn phi_on(&self, g: &GridData, n_sep: usize, n: usize) -> Result<C64> {
        let chain = Chain::open(2 * n, n_sep as i32 + 1, &g.qq, &g.pp, Some(&g.inv_z));
        Ok(-chain_integral(&g.grid, &chain)?)
    }

    /// `phi^(2n)_N`, the terms of `x_0^(N)`.
    pub fn phi(&self, n_sep: usize, n: usize) -> Result<ExpansionTerm> {
        self.regime_for(false)?;
        require_positive(n)?;
        self.evaluate(2 * n, n_sep, Method::ChainQuadrature, |g| self.phi_on(g, n_sep, n))
    }

    fn g_on(&self, g: &GridData, n_sep: usize, n: usize) -> Result<C64> {
        let chain = Chain::open(2 * n + 1, n_sep as i32 + 1, &g.pp, &g.qq, Some(&g.inv_z));
        chain_integral(&g.grid, &chain)
    }

    /// `G^(2n+1)_N`, above `T_c`.
    pub fn g(&self, n_sep: usize, n: usize) -> Result<ExpansionTerm> {
        self.regime_for(true)?;
        self.evaluate(2 * n + 1, n_sep, Method::ChainQuadrature, |g| self.g_on(g, n_sep, n))
    }

    fn f_even_eigen_on(&self, g: &GridData, n_sep: usize, n: usize, hat: bool) -> Result<C64> {
        let (ff, _) = self.kernel(g, n_sep, hat)?.ff_coeffs(n)?;
        Ok(C64::new(ff[n], 0.0))
    }

    fn f_even_direct_on(&self, g: &GridData, n_sep: usize, n: usize) -> Result<C64> {
        let d_odd = g.site(n_sep as i32, &g.qq);
        let d_even = g.site(n_sep as i32, &g.pp);
        let m = g.grid.m();
        let c = g.grid.coupling()?;
        let z = g.grid.nodes();
        match n {
            0 => Ok(C64::new(1.0, 0.0)),
            1 => {
                let parts = par::map_range(m, |j| {
                    let row = &c[j * m..(j + 1) * m];
                    d_odd[j] * row.iter().zip(&d_even).map(|(cjk, e)| e * cjk * cjk).sum::<C64>()
                });
                Ok(-par::pairwise_sum(&parts))
            }
            2 => {
                // for fixed odd pair, sum_{k1,k2} h_k1 h_k2 (z_k1 - z_k2)^2
                //   = 2 [(sum h)(sum h z^2) - (sum h z)^2]
                let parts = par::map_range(m * m, |idx| {
                    let (j1, j2) = (idx / m, idx % m);
                    if j1 == j2 {
                        return C64::new(0.0, 0.0);
                    }
                    let (mut s0, mut s1, mut s2) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                    for k in 0..m {
                        let a = c[j1 * m + k] * c[j2 * m + k];
                        let h = d_even[k] * a * a;
                        s0 += h;
                        s1 += h * z[k];
                        s2 += h * z[k] * z[k];
                    }
                    let dz = z[j1] - z[j2];
                    d_odd[j1] * d_odd[j2] * dz * dz * (s0 * s2 - s1 * s1) * 2.0
                });
                Ok(par::pairwise_sum(&parts) / 4.0)
            }
            _ => Err(CorrError::MethodUnavailable(format!("direct f^({}) needs a {}-fold grid product", 2 * n, 2 * n))),
        }
    }

    /// `f^(2n)_N` (hatted kernels when `hat`). `Direct` is available for
    /// `n <= 2`, `EigenSymmetric` for any `n` up to the grid size.
    pub fn f_even(&self, n_sep: usize, n: usize, hat: bool, method: Method) -> Result<ExpansionTerm> {
        self.regime_for(hat)?;
        match method {
            Method::EigenSymmetric => {
                self.evaluate(2 * n, n_sep, method, |g| self.f_even_eigen_on(g, n_sep, n, hat))
            }
            Method::Direct => self.evaluate(2 * n, n_sep, method, |g| self.f_even_direct_on(g, n_sep, n)),
            _ => Err(CorrError::MethodUnavailable(format!("{method:?} for f^(2n)"))),
        }
    }

    fn f_odd_combination_on(&self, g: &GridData, n_sep: usize, n: usize) -> Result<C64> {
        let (ff, _) = self.kernel(g, n_sep + 1, true)?.ff_coeffs(n)?;
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..=n {
            acc += self.g_on(g, n_sep, k)? * ff[n - k];
        }
        Ok(acc)
    }

    fn f_odd_direct_on(&self, g: &GridData, n_sep: usize, n: usize) -> Result<C64> {
        let z = g.grid.nodes();
        let base = n_sep as i32;
        let d_odd: Vec<C64> = g.site(base, &g.pp).iter().zip(&g.inv_z).map(|(d, iz)| d * iz).collect();
        let d_even: Vec<C64> = g.site(base, &g.qq).iter().zip(z).map(|(d, z)| d * z).collect();
        match n {
            0 => Ok(par::pairwise_sum(&d_odd)),
            1 => {
                let m = g.grid.m();
                let c = g.grid.coupling()?;
                let parts = par::map_range(m, |k| {
                    let (mut s0, mut s1, mut s2) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                    for j in 0..m {
                        let a = c[j * m + k];
                        let h = d_odd[j] * a * a;
                        s0 += h;
                        s1 += h * z[j];
                        s2 += h * z[j] * z[j];
                    }
                    d_even[k] * (s0 * s2 - s1 * s1) * 2.0
                });
                Ok(-par::pairwise_sum(&parts) / 2.0)
            }
            _ => Err(CorrError::MethodUnavailable(format!("direct f^({}) needs a {}-fold grid product", 2 * n + 1, 2 * n + 1))),
        }
    }

    /// `f^(2n+1)_N` above `T_c`. `Combination` sums
    /// `G^(2k+1)_N fhat^(2n-2k)_{N+1}`; `Direct` is available for `n <= 1`.
    pub fn f_odd(&self, n_sep: usize, n: usize, method: Method) -> Result<ExpansionTerm> {
        self.regime_for(true)?;
        match method {
            Method::Combination => self.evaluate(2 * n + 1, n_sep, method, |g| self.f_odd_combination_on(g, n_sep, n)),
            Method::Direct => self.evaluate(2 * n + 1, n_sep, method, |g| self.f_odd_direct_on(g, n_sep, n)),
            _ => Err(CorrError::MethodUnavailable(format!("{method:?} for f^(2n+1)"))),
        }
    }
}

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(CorrError::InvalidArgument("expansion index n starts at 1".into()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(a1: f64, a2: f64, m: usize) -> ExpansionContext {
        ExpansionContext::with_nodes(ModelParams::direct(a1, a2).unwrap(), m, Radius::Auto).unwrap()
    }

    #[test]
    fn degenerate_terms_vanish() {
        let c = ExpansionContext::with_nodes(ModelParams::degenerate(0.1).unwrap(), 64, Radius::Auto).unwrap();
        for n in 1..=3 {
            assert!(c.big_f(2, n, false).unwrap().value.abs() < 1e-13);
            assert!(c.big_f_tilde(2, n).unwrap().value.abs() < 1e-13);
            assert!(c.phi(2, n).unwrap().value.abs() < 1e-13);
        }
    }

    #[test]
    fn f2_brute_force() {
        let c = ctx(0.0, 0.5, 32);
        let g = &c.fine;
        let d_o = g.site(1, &g.qq);
        let d_e = g.site(1, &g.pp);
        let z = g.grid.nodes();
        let mut s = C64::new(0.0, 0.0);
        for j in 0..32 {
            for k in 0..32 {
                let cjk = (C64::new(1.0, 0.0) - z[j] * z[k]).inv();
                s += d_o[j] * d_e[k] * cjk * cjk;
            }
        }
        let f = c.big_f(1, 1, false).unwrap();
        assert!((f.value + s.re).abs() < 1e-13);
        assert!(f.imag_residue < 1e-13);
    }

    #[test]
    fn low_order_form_factors_match_exponents() {
        let c = ctx(0.0, 0.5, 64);
        for n_sep in 1..=3 {
            let f2 = c.big_f(n_sep, 1, false).unwrap().value;
            let f4 = c.big_f(n_sep, 2, false).unwrap().value;
            for method in [Method::Direct, Method::EigenSymmetric] {
                let a = c.f_even(n_sep, 1, false, method).unwrap().value;
                let b = c.f_even(n_sep, 2, false, method).unwrap().value;
                assert!((a - f2).abs() < 1e-12, "{method:?}");
                assert!((b - (f4 + 0.5 * f2 * f2)).abs() < 1e-11, "{method:?}");
            }
        }
    }

    #[test]
    fn odd_form_factor_routes() {
        let c = ctx(0.0, 2.5, 64);
        let f1 = c.f_odd(2, 0, Method::Combination).unwrap();
        assert_eq!(f1.value, c.g(2, 0).unwrap().value);
        let a = c.f_odd(2, 1, Method::Combination).unwrap().value;
        let b = c.f_odd(2, 1, Method::Direct).unwrap().value;
        assert!((a - b).abs() < 1e-10, "{a} {b}");
        assert!(matches!(c.f_odd(2, 2, Method::Direct), Err(CorrError::MethodUnavailable(_))));
    }

    #[test]
    fn regimes_are_enforced() {
        let c = ctx(0.0, 0.5, 16);
        assert!(matches!(c.big_f(1, 1, true), Err(CorrError::RegimeMismatch { .. })));
        assert!(matches!(c.g(1, 0), Err(CorrError::RegimeMismatch { .. })));
        let c = ctx(0.0, 2.5, 16);
        assert!(matches!(c.phi(1, 1), Err(CorrError::RegimeMismatch { .. })));
        assert!(c.big_f(1, 1, true).is_ok());
    }

    #[test]
    fn coarse_grid_error_estimate_is_small() {
        let c = ctx(0.0, 0.5, 64);
        let t = c.big_f(3, 1, false).unwrap();
        let reference = ctx(0.0, 0.5, 256).big_f(3, 1, false).unwrap().value;
        assert!(t.est_error >= (t.value - reference).abs());
        assert!(t.est_error < 1e-3);
        let c8 = ctx(0.0, 0.5, 8);
        let t8 = c8.big_f(3, 1, false).unwrap();
        assert_eq!(t8.est_error, t8.value.abs());
    }
}
