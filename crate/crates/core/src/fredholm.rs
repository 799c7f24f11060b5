//! Nyström discretization of the two-step chain kernel.
//!
//! On a grid `z_k` with weights `u_k`, set `d_odd(k) = u_k z_k^N W_odd(z_k)`,
//! `d_even(k) = u_k z_k^N W_even(z_k)` and `C_jk = 1 / (1 - z_j z_k)`. Then
//! `K = A B` with `A = diag(d_odd) C` and `B = diag(d_even) C`, and
//! `tr K^n` is exactly the closed chain of `2n` sites on that grid. Hence
//!
//! * `sum_n F^(2n) = -sum_n tr(K^n) / n = log det(I - K)`
//! * `f^(2n) = (-1)^n e_n(eigenvalues of K)`
//!
//! The weights sit on the left index only, so no square roots of weights are
//! needed.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{CorrError, Result};
use crate::kernels::KernelSet;
use crate::linalg::{self, CMatrix};
use crate::params::{ModelParams, Regime};
use crate::quadrature::ContourGrid;

type C64 = Complex64;

/// Power-sum mismatch, in units of `scale * EPSILON`, above which the
/// spectrum is treated as unreliable and traces are used instead.
pub const EIGEN_CONDITION_LIMIT: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffRoute {
    Eigenvalues,
    Traces,
}

#[derive(Debug)]
pub struct KernelMatrix {
    k: CMatrix,
    eigs: OnceLock<std::result::Result<Vec<C64>, CorrError>>,
}

impl KernelMatrix {
    /// Kernel of `F^(2n)_N` (or of the hatted terms when `hat`, which needs
    /// the high-temperature regime).
    pub fn build(params: &ModelParams, grid: &ContourGrid, n_sep: usize, hat: bool) -> Result<KernelMatrix> {
        params.require(if hat { Regime::Above } else { Regime::Below })?;
        let kernels = KernelSet::new(*params);
        let odd = grid.sample(|z| kernels.qq(z))?;
        let even = grid.sample(|z| kernels.pp(z))?;
        let c = grid.coupling()?;
        let m = grid.m();
        let scaled = |w: &[C64]| -> Vec<C64> {
            grid.nodes()
                .iter()
                .zip(grid.weights())
                .zip(w)
                .map(|((z, u), w)| u * z.powi(n_sep as i32) * w)
                .collect()
        };
        let (d_odd, d_even) = (scaled(&odd), scaled(&even));
        let a = CMatrix::from_fn(m, m, |j, k| d_odd[j] * c[j * m + k]);
        let b = CMatrix::from_fn(m, m, |j, k| d_even[j] * c[j * m + k]);
        let k = a * b;
        if k.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(CorrError::NonFinite("kernel matrix"));
        }
        Ok(KernelMatrix { k, eigs: OnceLock::new() })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    /// `tr K^1 .. tr K^n_max`.
    pub fn traces(&self, n_max: usize) -> Vec<C64> {
        let mut out = Vec::with_capacity(n_max);
        let mut power = self.k.clone();
        for n in 1..=n_max {
            out.push(power.trace());
            if n < n_max {
                power = &power * &self.k;
            }
        }
        out
    }

    pub fn eigenvalues(&self) -> Result<&[C64]> {
        self.eigs
            .get_or_init(|| linalg::eigenvalues(&self.k))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.iter().map(|l| l.norm()).fold(0.0, f64::max))
    }

    /// `log det(I - K) = sum_i log(1 - lambda_i)`, real part. Falls back to
    /// an LU determinant when the eigensolver fails.
    pub fn log_det_expansion(&self) -> Result<f64> {
        match self.eigenvalues() {
            Ok(ev) => {
                let rho = ev.iter().map(|l| l.norm()).fold(0.0, f64::max);
                if rho >= 1.0 {
                    return Err(CorrError::SpectralRadiusExceeded(rho));
                }
                let s: C64 = ev.iter().map(|l| (C64::new(1.0, 0.0) - l).ln()).sum();
                Ok(s.re)
            }
            Err(_) => {
                let m = self.dim();
                let d = linalg::determinant(&(CMatrix::identity(m, m) - &self.k))?;
                Ok(d.ln().re)
            }
        }
    }

    /// `e_0 .. e_n_max` of the spectrum, from `prod_i (1 + lambda_i t)`.
    pub fn elementary_from_eigenvalues(&self, n_max: usize) -> Result<Vec<C64>> {
        let mut e = vec![C64::new(0.0, 0.0); n_max + 1];
        e[0] = C64::new(1.0, 0.0);
        for lambda in self.eigenvalues()? {
            for j in (1..=n_max).rev() {
                let prev = e[j - 1];
                e[j] += lambda * prev;
            }
        }
        Ok(e)
    }

    /// `e_0 .. e_n_max` from the traces by Newton's identities.
    pub fn elementary_from_traces(&self, n_max: usize) -> Vec<C64> {
        newton(&self.traces(n_max))
    }

    /// `e_0 .. e_n_max` as Taylor coefficients of `det(I + t K)`, sampled
    /// on `|t| = 1` with LU determinants and inverted by a discrete Fourier
    /// sum over enough points to avoid aliasing.
    pub fn elementary_from_charpoly(&self, n_max: usize) -> Result<Vec<C64>> {
        let m = self.dim();
        let points = (m + 1).next_power_of_two();
        let id = CMatrix::identity(m, m);
        let step = std::f64::consts::TAU / points as f64;
        let samples = crate::par::map_range(points, |j| {
            let t = C64::from_polar(1.0, step * j as f64);
            linalg::determinant(&(&id + &self.k * t))
        });
        let samples: Vec<C64> = samples.into_iter().collect::<Result<_>>()?;
        Ok((0..=n_max.min(m))
            .map(|n| {
                let s: C64 = samples
                    .iter()
                    .enumerate()
                    .map(|(j, d)| d * C64::from_polar(1.0, -step * ((j * n) % points) as f64))
                    .sum();
                s / points as f64
            })
            .chain(std::iter::repeat_n(C64::new(0.0, 0.0), n_max.saturating_sub(m)))
            .collect())
    }

    /// Mismatch between eigenvalue power sums and traces for `k <= n_max`,
    /// in units of `scale * EPSILON` where `scale = sum |lambda|^k`.
    pub fn eigen_condition(&self, n_max: usize) -> Result<f64> {
        let ev = self.eigenvalues()?;
        let traces = self.traces(n_max.max(1));
        let mut worst: f64 = 0.0;
        for (k, tr) in traces.iter().enumerate() {
            let p = (k + 1) as i32;
            let sum: C64 = ev.iter().map(|l| l.powi(p)).sum();
            let scale = ev.iter().map(|l| l.norm().powi(p)).sum::<f64>().max(f64::MIN_POSITIVE);
            worst = worst.max((sum - tr).norm() / (scale * f64::EPSILON));
        }
        Ok(worst)
    }

    /// `(-1)^n e_n` for `n = 0..=n_max`: the discrete form factors. Uses the
    /// spectrum unless it fails or is badly conditioned, then the traces.
    pub fn ff_coeffs(&self, n_max: usize) -> Result<(Vec<f64>, CoeffRoute)> {
        if n_max > self.dim() {
            return Err(CorrError::InvalidArgument(format!("n_max {n_max} exceeds kernel size {}", self.dim())));
        }
        let (e, route) = match self.eigen_condition(n_max) {
            Ok(c) if c <= EIGEN_CONDITION_LIMIT => (self.elementary_from_eigenvalues(n_max)?, CoeffRoute::Eigenvalues),
            _ => (self.elementary_from_traces(n_max), CoeffRoute::Traces),
        };
        let signed = e
            .iter()
            .enumerate()
            .map(|(n, v)| if n % 2 == 0 { v.re } else { -v.re })
            .collect();
        Ok((signed, route))
    }

    /// `F^(2n) = -tr(K^n) / n` for `n = 1..=n_max`.
    pub fn exp_coeffs(&self, n_max: usize) -> Vec<f64> {
        self.traces(n_max)
            .iter()
            .enumerate()
            .map(|(i, t)| -t.re / (i + 1) as f64)
            .collect()
    }
}

/// Newton's identities: `n e_n = sum_{k=1}^n (-1)^{k-1} e_{n-k} p_k`.
pub fn newton(power_sums: &[C64]) -> Vec<C64> {
    let mut e = vec![C64::new(1.0, 0.0)];
    for n in 1..=power_sums.len() {
        let mut acc = C64::new(0.0, 0.0);
        for k in 1..=n {
            let term = e[n - k] * power_sums[k - 1];
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / n as f64);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{chain_integral, make_grid, Chain, Radius};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn newton_on_known_roots() {
        // roots 1, 2, 3: e1 = 6, e2 = 11, e3 = 6
        let p: Vec<C64> = (1..=3).map(|k| c(1f64 + 2f64.powi(k) + 3f64.powi(k))).collect();
        let e = newton(&p);
        for (got, want) in e.iter().zip([1.0, 6.0, 11.0, 6.0]) {
            assert!((got - c(want)).norm() < 1e-12);
        }
    }

    #[test]
    fn traces_are_closed_chains() {
        let p = ModelParams::direct(0.0, 0.5).unwrap();
        let g = make_grid(&p, 64, Radius::Auto).unwrap();
        let km = KernelMatrix::build(&p, &g, 2, false).unwrap();
        let ks = KernelSet::new(p);
        let qq = g.sample(|z| ks.qq(z)).unwrap();
        let pp = g.sample(|z| ks.pp(z)).unwrap();
        let tr = km.traces(2);
        for n in 1..=2 {
            let chain = chain_integral(&g, &Chain::closed(n, 2, &qq, &pp)).unwrap();
            let tol = if n == 1 { 1e-12 } else { 1e-11 };
            assert!((tr[n - 1] - chain).norm() < tol, "n={n}");
        }
    }

    #[test]
    fn degenerate_kernel_has_zero_traces() {
        let p = ModelParams::degenerate(0.1).unwrap();
        let g = make_grid(&p, 64, Radius::Auto).unwrap();
        let km = KernelMatrix::build(&p, &g, 1, false).unwrap();
        // the inner sum of K is itself a contour integral of an analytic
        // function, so K vanishes up to aliasing along with its traces
        for (i, t) in km.traces(4).iter().enumerate() {
            assert!((t / (i + 1) as f64).norm() < 1e-13);
        }
        let (ff, _) = km.ff_coeffs(3).unwrap();
        assert_eq!(ff[0], 1.0);
    }

    #[test]
    fn three_routes_to_elementary_functions() {
        let p = ModelParams::direct(0.2, 0.5).unwrap();
        let g = make_grid(&p, 64, Radius::Auto).unwrap();
        let km = KernelMatrix::build(&p, &g, 1, false).unwrap();
        let a = km.elementary_from_eigenvalues(4).unwrap();
        let b = km.elementary_from_traces(4);
        let d = km.elementary_from_charpoly(4).unwrap();
        for n in 0..=4 {
            assert!((a[n] - b[n]).norm() < 1e-10, "n={n}");
            assert!((a[n] - d[n]).norm() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn regime_is_checked() {
        let p = ModelParams::direct(0.0, 0.5).unwrap();
        let g = make_grid(&p, 16, Radius::Auto).unwrap();
        assert!(matches!(KernelMatrix::build(&p, &g, 1, true), Err(CorrError::RegimeMismatch { .. })));
    }

    #[test]
    fn log_det_matches_exp_series() {
        let p = ModelParams::direct(0.0, 0.5).unwrap();
        let g = make_grid(&p, 64, Radius::Auto).unwrap();
        let km = KernelMatrix::build(&p, &g, 1, false).unwrap();
        let series: f64 = km.exp_coeffs(12).iter().sum();
        assert!((km.log_det_expansion().unwrap() - series).abs() < 1e-13);
        assert!(km.spectral_radius().unwrap() < 1.0);
    }
}
