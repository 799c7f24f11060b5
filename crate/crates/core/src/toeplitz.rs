//! Toeplitz determinants: the reference values every expansion is checked
//! against.
//!
//! `A_N = [a_{i-j}]` is built from the Fourier coefficients of `phi`, and
//! `B_N = [b_{i-j}]` from those of `phi1`, with `b_n = a_{n-1}`. Removing the
//! first row and the last column of `B_{N+1}` leaves `A_N`.

use std::collections::HashMap;
use std::sync::RwLock;

use num_complex::Complex64;

use crate::error::{CorrError, Result};
use crate::kernels::KernelSet;
use crate::linalg::{self, CMatrix};
use crate::params::{ModelParams, Regime};
use crate::quadrature::ContourGrid;

type C64 = Complex64;

/// Node count of the unit-circle grid used for the symbol coefficients.
pub const ORACLE_NODES: usize = 512;

/// Largest matrix order accepted by the determinant routines.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Phi,
    Phi1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    /// `[a_{i-j}]`
    A,
    /// `[b_{i-j}]`
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Determinant {
    pub value: f64,
    /// `|Im det|`; nonzero only through rounding and quadrature error.
    pub imag_residue: f64,
}

/// Fourier coefficients of the symbol on one grid, cached per index.
#[derive(Debug)]
pub struct ToeplitzOracle {
    params: ModelParams,
    grid: ContourGrid,
    samples: Vec<C64>,
    roots: Vec<C64>,
    cache: RwLock<HashMap<i64, C64>>,
}

impl ToeplitzOracle {
    /// Coefficients from `ORACLE_NODES` points on the unit circle, which lies
    /// inside the analyticity annulus of `phi` in both regimes.
    pub fn new(params: ModelParams) -> Result<ToeplitzOracle> {
        ToeplitzOracle::with_grid(params, ContourGrid::new(ORACLE_NODES, 1.0)?)
    }

    pub fn with_grid(params: ModelParams, grid: ContourGrid) -> Result<ToeplitzOracle> {
        let kernels = KernelSet::new(params);
        let samples = grid.sample(|z| kernels.phi(z))?;
        let m = grid.m();
        let step = std::f64::consts::TAU / m as f64;
        let roots = (0..m).map(|k| C64::from_polar(1.0, step * k as f64)).collect();
        Ok(ToeplitzOracle { params, grid, samples, roots, cache: RwLock::new(HashMap::new()) })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &ContourGrid {
        &self.grid
    }

    fn a(&self, n: i64) -> C64 {
        if let Some(v) = self.cache.read().expect("coefficient cache poisoned").get(&n) {
            return *v;
        }
        // a_n = (1/M) sum_k phi(z_k) z_k^{-n}
        let m = self.grid.m() as i64;
        let scale = self.grid.radius().powi(-(n as i32)) / m as f64;
        let mut acc = C64::new(0.0, 0.0);
        for (k, s) in self.samples.iter().enumerate() {
            let idx = (-(k as i64) * n).rem_euclid(m) as usize;
            acc += s * self.roots[idx];
        }
        let v = acc * scale;
        self.cache.write().expect("coefficient cache poisoned").insert(n, v);
        v
    }

    /// `a_n` for `Phi`, `b_n = a_{n-1}` for `Phi1`.
    pub fn fourier_coeff(&self, n: i64, symbol: Symbol) -> C64 {
        match symbol {
            Symbol::Phi => self.a(n),
            Symbol::Phi1 => self.a(n - 1),
        }
    }

    pub fn matrix(&self, order: usize, kind: MatrixKind) -> CMatrix {
        let symbol = match kind {
            MatrixKind::A => Symbol::Phi,
            MatrixKind::B => Symbol::Phi1,
        };
        CMatrix::from_fn(order, order, |i, j| self.fourier_coeff(i as i64 - j as i64, symbol))
    }

    /// `D_N = det A_N`.
    pub fn det_dn(&self, n: usize) -> Result<Determinant> {
        check_order(n)?;
        determinant(&self.matrix(n, MatrixKind::A))
    }

    /// `Dhat_N = det B_N`, above the critical point.
    pub fn det_dhat_n(&self, n: usize) -> Result<Determinant> {
        self.params.require(Regime::Above)?;
        check_order(n)?;
        determinant(&self.matrix(n, MatrixKind::B))
    }

    /// Solves `M_{N+1} x = e_0` for `M = A` or `B`.
    pub fn solve_x(&self, n: usize, kind: MatrixKind) -> Result<Vec<f64>> {
        if kind == MatrixKind::B {
            self.params.require(Regime::Above)?;
        }
        check_order(n + 1)?;
        let mut rhs = vec![C64::new(0.0, 0.0); n + 1];
        rhs[0] = C64::new(1.0, 0.0);
        let x = linalg::solve(&self.matrix(n + 1, kind), &rhs)?;
        Ok(x.into_iter().map(|v| v.re).collect())
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(CorrError::InvalidArgument(format!("matrix order {n} outside 1..={MAX_ORDER}")));
    }
    Ok(())
}

fn determinant(m: &CMatrix) -> Result<Determinant> {
    let d = linalg::determinant(m)?;
    Ok(Determinant { value: d.re, imag_residue: d.im.abs() })
}

/// `a_n` (or `b_n`) by quadrature on the given grid.
pub fn fourier_coeff(params: &ModelParams, grid: &ContourGrid, n: i64, symbol: Symbol) -> Result<C64> {
    Ok(ToeplitzOracle::with_grid(*params, grid.clone())?.fourier_coeff(n, symbol))
}

pub fn det_dn(params: &ModelParams, n: usize) -> Result<Determinant> {
    ToeplitzOracle::new(*params)?.det_dn(n)
}

pub fn det_dhat_n(params: &ModelParams, n: usize) -> Result<Determinant> {
    ToeplitzOracle::new(*params)?.det_dhat_n(n)
}

pub fn solve_x(params: &ModelParams, n: usize, kind: MatrixKind) -> Result<Vec<f64>> {
    ToeplitzOracle::new(*params)?.solve_x(n, kind)
}

/// Symbol coefficients from the binomial series of each factor, with no
/// quadrature involved.
pub mod series {
    use crate::params::{ModelParams, Regime};

    /// Terms kept in each factor series.
    pub const TERMS: usize = 200;

    /// Coefficients of `(1 - c x)^s`.
    fn binomial(s: f64, c: f64, terms: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(terms);
        let mut b = 1.0;
        let mut ck = 1.0;
        for k in 0..terms {
            out.push(b * ck);
            b *= (k as f64 - s) / (k as f64 + 1.0);
            ck *= c;
        }
        out
    }

    fn product(x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = x.len().min(y.len());
        (0..n).map(|k| (0..=k).map(|j| x[j] * y[k - j]).sum()).collect()
    }

    /// `a_n` of `phi`, truncated at `TERMS` terms per factor.
    pub fn coefficient(params: &ModelParams, n: i64) -> f64 {
        let (a1, a2) = (params.alpha1(), params.alpha2());
        let (inner, outer, shift, sign) = match params.regime() {
            // phi = [(1-a1 z)^{1/2}(1-a2 z)^{-1/2}] [(1-a2/z)^{1/2}(1-a1/z)^{-1/2}]
            Regime::Below => (
                product(&binomial(0.5, a1, TERMS), &binomial(-0.5, a2, TERMS)),
                product(&binomial(0.5, a2, TERMS), &binomial(-0.5, a1, TERMS)),
                0,
                1.0,
            ),
            // phi = -(1/z) [(1-a1 z)(1-z/a2)]^{1/2} [(1-a1/z)(1-1/(a2 z))]^{-1/2}
            Regime::Above => (
                product(&binomial(0.5, a1, TERMS), &binomial(0.5, 1.0 / a2, TERMS)),
                product(&binomial(-0.5, a1, TERMS), &binomial(-0.5, 1.0 / a2, TERMS)),
                1,
                -1.0,
            ),
        };
        // coefficient of z^{n + shift} in inner(z) * outer(1/z)
        let target = n + shift;
        let start = (-target).max(0) as usize;
        let mut acc = 0.0;
        for k in start..outer.len() {
            let j = target + k as i64;
            if j as usize >= inner.len() {
                break;
            }
            acc += inner[j as usize] * outer[k];
        }
        sign * acc
    }

    /// `det A_N` from series coefficients, by Gaussian elimination with
    /// partial pivoting in real arithmetic.
    pub fn det_dn(params: &ModelParams, n: usize) -> f64 {
        let coeff: Vec<f64> = (-(n as i64)..=n as i64).map(|k| coefficient(params, k)).collect();
        let at = |k: i64| coeff[(k + n as i64) as usize];
        let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| at(i as i64 - j as i64)).collect()).collect();
        let mut det = 1.0;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap())
                .unwrap();
            if m[piv][col] == 0.0 {
                return 0.0;
            }
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            det *= m[col][col];
            for r in col + 1..n {
                let f = m[r][col] / m[col][col];
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
        det
    }
}

/// Plain-text reference records, one per line:
/// `alpha1 alpha2 N value est_error route`. Lines starting with `#` are
/// comments.
pub mod fixture {
    use crate::error::{CorrError, Result};

    #[derive(Debug, Clone, PartialEq)]
    pub struct FixtureRecord {
        pub alpha1: f64,
        pub alpha2: f64,
        pub n: usize,
        pub value: f64,
        pub est_error: f64,
        pub route: String,
    }

    impl FixtureRecord {
        pub fn to_line(&self) -> String {
            format!(
                "{} {} {} {:.17e} {:.3e} {}",
                self.alpha1, self.alpha2, self.n, self.value, self.est_error, self.route
            )
        }
    }

    pub fn parse(text: &str) -> Result<Vec<FixtureRecord>> {
        let bad = |line: &str| CorrError::InvalidArgument(format!("malformed fixture line: {line}"));
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|line| {
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 6 {
                    return Err(bad(line));
                }
                let num = |s: &str| s.parse::<f64>().map_err(|_| bad(line));
                Ok(FixtureRecord {
                    alpha1: num(f[0])?,
                    alpha2: num(f[1])?,
                    n: f[2].parse().map_err(|_| bad(line))?,
                    value: num(f[3])?,
                    est_error: num(f[4])?,
                    route: f[5].to_string(),
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{make_grid, Radius};

    fn below() -> ModelParams {
        ModelParams::direct(0.0, 0.5).unwrap()
    }

    #[test]
    fn degenerate_symbol_gives_delta_coefficients() {
        let o = ToeplitzOracle::new(ModelParams::degenerate(0.35).unwrap()).unwrap();
        for n in -5..=5 {
            let want = if n == 0 { 1.0 } else { 0.0 };
            assert!((o.fourier_coeff(n, Symbol::Phi) - C64::new(want, 0.0)).norm() < 1e-15);
        }
        for n in 1..6 {
            assert!((o.det_dn(n).unwrap().value - 1.0).abs() < 1e-14);
        }
        let x = o.solve_x(4, MatrixKind::A).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && x[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn shifted_symbol_is_bit_identical() {
        for p in [below(), ModelParams::direct(0.2, 3.0).unwrap()] {
            let o = ToeplitzOracle::new(p).unwrap();
            for n in -6..=6 {
                assert_eq!(o.fourier_coeff(n, Symbol::Phi1), o.fourier_coeff(n - 1, Symbol::Phi));
            }
        }
    }

    #[test]
    fn shifted_symbol_matches_direct_quadrature_of_phi1() {
        let p = ModelParams::direct(0.2, 3.0).unwrap();
        let o = ToeplitzOracle::new(p).unwrap();
        let k = KernelSet::new(p);
        let g = ContourGrid::new(ORACLE_NODES, 1.0).unwrap();
        for n in -4..=4i32 {
            let b = crate::quadrature::contour_integral(&g, |z| Ok(k.phi1(z)? * z.powi(-n - 1))).unwrap();
            assert!((b - o.fourier_coeff(n as i64, Symbol::Phi1)).norm() < 1e-14);
        }
    }

    #[test]
    fn coefficients_are_real_and_match_series() {
        for p in [
            below(),
            ModelParams::direct(0.2, 0.5).unwrap(),
            ModelParams::direct(0.0, 2.5).unwrap(),
            ModelParams::direct(0.2, 3.0).unwrap(),
        ] {
            let o = ToeplitzOracle::new(p).unwrap();
            for n in -8..=8 {
                let a = o.fourier_coeff(n, Symbol::Phi);
                assert!(a.im.abs() < 1e-13);
                assert!((a.re - series::coefficient(&p, n)).abs() < 1e-12, "{p} n={n}");
            }
        }
    }

    #[test]
    fn interior_grid_reproduces_unit_circle_coefficients() {
        let p = below();
        let g = make_grid(&p, 64, Radius::Auto).unwrap();
        let a0 = fourier_coeff(&p, &g, 0, Symbol::Phi).unwrap();
        assert!((a0.re - series::coefficient(&p, 0)).abs() < 1e-10);
    }

    #[test]
    fn one_by_one_determinant_is_a0() {
        let o = ToeplitzOracle::new(below()).unwrap();
        assert_eq!(o.det_dn(1).unwrap().value, o.fourier_coeff(0, Symbol::Phi).re);
    }

    #[test]
    fn b_matrix_structure() {
        let o = ToeplitzOracle::new(ModelParams::direct(0.0, 2.5).unwrap()).unwrap();
        let b = o.matrix(3, MatrixKind::B);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b[(i, j)], o.fourier_coeff(i as i64 - j as i64 - 1, Symbol::Phi));
            }
        }
        let b4 = o.matrix(4, MatrixKind::B);
        let a3 = o.matrix(3, MatrixKind::A);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b4[(i + 1, j)], a3[(i, j)]);
            }
        }
    }

    #[test]
    fn ratio_identities() {
        let o = ToeplitzOracle::new(below()).unwrap();
        for n in 1..=6 {
            let x = o.solve_x(n, MatrixKind::A).unwrap();
            let r = o.det_dn(n).unwrap().value / o.det_dn(n + 1).unwrap().value;
            assert!((x[0] - r).abs() < 1e-11);
        }
        let o = ToeplitzOracle::new(ModelParams::direct(0.0, 2.5).unwrap()).unwrap();
        for n in 1..=6 {
            let x = o.solve_x(n, MatrixKind::B).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let r = o.det_dn(n).unwrap().value / o.det_dhat_n(n + 1).unwrap().value;
            assert!((sign * x[n] - r).abs() < 1e-10);
        }
    }

    #[test]
    fn regime_and_order_errors() {
        let o = ToeplitzOracle::new(below()).unwrap();
        assert!(matches!(o.det_dhat_n(3), Err(CorrError::RegimeMismatch { .. })));
        assert!(matches!(o.solve_x(3, MatrixKind::B), Err(CorrError::RegimeMismatch { .. })));
        assert!(o.det_dn(0).is_err());
        assert!(o.det_dn(65).is_err());
    }

    #[test]
    fn fixture_lines_parse() {
        let rec = fixture::FixtureRecord {
            alpha1: 0.2,
            alpha2: 0.5,
            n: 4,
            value: 0.970_994_444_195_4,
            est_error: 1e-15,
            route: "quadrature+series".into(),
        };
        let text = format!("# comment\n\n{}\n", rec.to_line());
        let parsed = fixture::parse(&text).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].n, 4);
        assert_eq!(parsed[0].value, rec.value);
        assert!(fixture::parse("0.1 0.2 3").is_err());
    }
}
