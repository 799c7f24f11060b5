//! Periodic trapezoidal quadrature on circles and the chain contraction
//! engine.
//!
//! A grid of `M` nodes `z_k = r e^{2 pi i k / M}` carries weights
//! `u_k = z_k / M`, so that `(1 / 2 pi i) \oint f(z) dz ~ sum_k u_k f(z_k)`.
//! For integrands analytic in an annulus around `|z| = r` the error decays
//! geometrically in `M`.
//!
//! Every multiple integral returned from this module is normalised by
//! `(2 pi i)^{-L}` for `L` integration variables. Formulas written with the
//! real measure `(2 pi)^{-L} \oint ... dz` pick up the factor `i^L`
//! ([`real_measure_factor`]); this is the only place the conversion lives.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{CorrError, Result};
use crate::par;
use crate::params::ModelParams;

type C64 = Complex64;

pub const DEFAULT_NODES: usize = 64;
pub const MAX_NODES: usize = 1024;

/// `|1 - z z'|` below this on the grid is reported as a pole.
const POLE_GUARD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    /// Midpoint of `(r_min, 1)` where `r_min` is the inner analyticity radius.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub struct ContourGrid {
    m: usize,
    r: f64,
    nodes: Vec<C64>,
    weights: Vec<C64>,
    coupling: OnceLock<Option<Vec<C64>>>,
}

impl ContourGrid {
    /// Raw grid on `|z| = r`. No check against kernel annuli.
    pub fn new(m: usize, r: f64) -> Result<ContourGrid> {
        if m < 8 || !m.is_power_of_two() {
            return Err(CorrError::InvalidNodeCount(m));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(CorrError::RadiusOutOfRange { r, min: 0.0, max: f64::INFINITY });
        }
        let step = std::f64::consts::TAU / m as f64;
        let nodes: Vec<C64> = (0..m).map(|k| C64::from_polar(r, step * k as f64)).collect();
        let weights = nodes.iter().map(|z| z / m as f64).collect();
        Ok(ContourGrid { m, r, nodes, weights, coupling: OnceLock::new() })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    /// Same radius, different node count.
    pub fn with_nodes(&self, m: usize) -> Result<ContourGrid> {
        ContourGrid::new(m, self.r)
    }

    /// Values of `f` at the nodes.
    pub fn sample<F>(&self, f: F) -> Result<Vec<C64>>
    where
        F: Fn(C64) -> Result<C64>,
    {
        self.nodes
            .iter()
            .map(|&z| {
                let v = f(z)?;
                if v.re.is_finite() && v.im.is_finite() {
                    Ok(v)
                } else {
                    Err(CorrError::NonFinite("kernel sample"))
                }
            })
            .collect()
    }

    /// Row-major `M x M` matrix `1 / (1 - z_j z_k)`, built on first use.
    pub fn coupling(&self) -> Result<&[C64]> {
        let c = self.coupling.get_or_init(|| {
            let m = self.m;
            let mut out = Vec::with_capacity(m * m);
            for zj in &self.nodes {
                for zk in &self.nodes {
                    let d = C64::new(1.0, 0.0) - zj * zk;
                    if d.norm() < POLE_GUARD {
                        return None;
                    }
                    out.push(d.inv());
                }
            }
            Some(out)
        });
        c.as_deref().ok_or(CorrError::PoleOnGrid)
    }
}

/// Grid for the chain integrals of `params`: radius inside `(r_min, 1)`.
pub fn make_grid(params: &ModelParams, m: usize, radius: Radius) -> Result<ContourGrid> {
    let r_min = params.inner_radius();
    let r = match radius {
        Radius::Auto => 0.5 * (1.0 + r_min),
        Radius::Fixed(r) => r,
    };
    if !(r > r_min && r < 1.0) {
        return Err(CorrError::RadiusOutOfRange { r, min: r_min, max: 1.0 });
    }
    ContourGrid::new(m, r)
}

/// `(1 / 2 pi i) \oint f(z) dz` by the trapezoidal rule.
pub fn contour_integral<F>(grid: &ContourGrid, f: F) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let terms = grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .map(|(&z, &u)| {
            let v = f(z)?;
            if v.re.is_finite() && v.im.is_finite() {
                Ok(u * v)
            } else {
                Err(CorrError::NonFinite("contour integrand"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(par::pairwise_sum(&terms))
}

/// `(2 pi)^{-L} \oint d^L z = i^L (2 pi i)^{-L} \oint d^L z`.
pub fn real_measure_factor(dims: usize) -> C64 {
    match dims % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// A nearest-neighbour chain of `sites` integration variables.
///
/// Site `i` (1-based) carries `z_i^power` times `odd` for odd `i` and `even`
/// for even `i`; consecutive sites are coupled by `1 / (1 - z_i z_{i+1})`.
/// A closed chain also couples the last site back to the first. An open chain
/// may carry an extra factor on its first and last site (twice on the same
/// variable when `sites == 1`).
#[derive(Debug, Clone, Copy)]
pub struct Chain<'a> {
    pub sites: usize,
    pub power: i32,
    pub odd: &'a [C64],
    pub even: &'a [C64],
    pub closed: bool,
    pub endpoint: Option<&'a [C64]>,
}

impl<'a> Chain<'a> {
    /// Closed chain of `2n` sites.
    pub fn closed(n: usize, power: i32, odd: &'a [C64], even: &'a [C64]) -> Chain<'a> {
        Chain { sites: 2 * n, power, odd, even, closed: true, endpoint: None }
    }

    pub fn open(sites: usize, power: i32, odd: &'a [C64], even: &'a [C64], endpoint: Option<&'a [C64]>) -> Chain<'a> {
        Chain { sites, power, odd, even, closed: false, endpoint }
    }
}

fn site_weights(grid: &ContourGrid, power: i32, w: &[C64]) -> Vec<C64> {
    grid.nodes
        .iter()
        .zip(&grid.weights)
        .zip(w)
        .map(|((z, u), w)| u * z.powi(power) * w)
        .collect()
}

/// `(C v)_k = sum_j C_kj v_j` in fixed order.
fn couple(c: &[C64], v: &[C64], m: usize, k: usize) -> C64 {
    let row = &c[k * m..(k + 1) * m];
    row.iter().zip(v).fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a * b)
}

/// Normalised chain integral `(2 pi i)^{-L} \oint ... \oint` by vector
/// propagation over the grid: `O(L M^2)` for an open chain and per starting
/// node of a closed chain.
pub fn chain_integral(grid: &ContourGrid, chain: &Chain<'_>) -> Result<C64> {
    let m = grid.m;
    if chain.odd.len() != m || chain.even.len() != m || chain.endpoint.is_some_and(|e| e.len() != m) {
        return Err(CorrError::InvalidArgument("weight length differs from node count".into()));
    }
    if chain.sites == 0 {
        return Err(CorrError::InvalidArgument("chain needs at least one site".into()));
    }
    if chain.closed && (!chain.sites.is_multiple_of(2) || chain.endpoint.is_some()) {
        return Err(CorrError::InvalidArgument(
            "closed chains have an even number of sites and no endpoint factors".into(),
        ));
    }
    let c = grid.coupling()?;
    let d_odd = site_weights(grid, chain.power, chain.odd);
    let d_even = site_weights(grid, chain.power, chain.even);
    let site = |i: usize| if i % 2 == 1 { &d_odd } else { &d_even };

    let value = if chain.closed {
        let parts = par::map_range(m, |s| {
            let mut v: Vec<C64> = (0..m).map(|k| d_even[k] * c[k * m + s] * d_odd[s]).collect();
            let mut next = vec![C64::new(0.0, 0.0); m];
            for i in 3..=chain.sites {
                let d = site(i);
                for (k, slot) in next.iter_mut().enumerate() {
                    *slot = d[k] * couple(c, &v, m, k);
                }
                std::mem::swap(&mut v, &mut next);
            }
            couple(c, &v, m, s)
        });
        par::pairwise_sum(&parts)
    } else {
        let mut v = d_odd.clone();
        if let Some(e) = chain.endpoint {
            v.iter_mut().zip(e).for_each(|(a, b)| *a *= b);
        }
        for i in 2..=chain.sites {
            let d = site(i);
            let prev = v;
            v = par::map_range(m, |k| d[k] * couple(c, &prev, m, k));
        }
        if let Some(e) = chain.endpoint {
            v.iter_mut().zip(e).for_each(|(a, b)| *a *= b);
        }
        par::pairwise_sum(&v)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(CorrError::NonFinite("chain integral"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refined {
    pub value: C64,
    pub est_error: f64,
    pub m_used: usize,
}

/// Doubles the node count from `m_start` until two successive values differ
/// by less than `tol * max(1, |value|)` or `m_max` is reached.
pub fn refine_until<F>(m_start: usize, tol: f64, m_max: usize, mut compute: F) -> Result<Refined>
where
    F: FnMut(usize) -> Result<C64>,
{
    let mut m = m_start;
    let mut prev = compute(m)?;
    let mut diff = f64::INFINITY;
    while m * 2 <= m_max {
        let v = compute(m * 2)?;
        diff = (v - prev).norm();
        m *= 2;
        prev = v;
        if diff < tol * v.norm().max(1.0) {
            return Ok(Refined { value: v, est_error: diff, m_used: m });
        }
    }
    Err(CorrError::NoConvergence { best: prev.re, est_error: diff, m_used: m })
}
