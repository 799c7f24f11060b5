//! Algebraic identities behind the form factor integrands.
//!
//! Below the critical point the signed permutation sum is the Cauchy
//! determinant:
//!
//! `sum_s sgn(s) prod_k 1/(1 - e_k o_{s(k)}) = V(o) V(e) / prod_{k,l} (1 - o_k e_l)`
//!
//! with `V(x) = prod_{p<q} (x_p - x_q)`. Above it there is one more odd point
//! than even points, and the unpaired odd point carries a factor `1/o`:
//!
//! `sum_s sgn(s) (1/o_{s(n+1)}) prod_{q<=n} 1/(1 - o_{s(q)} e_q)
//!     = V(o) V(e) / (prod_k o_k prod_{k,l} (1 - o_k e_l))`
//!
//! The permutation sums cancel heavily, so they are accumulated in
//! double-double arithmetic.

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use super::combinatorics::permutations;
use super::ExpansionContext;
use crate::error::{CorrError, Result};
use crate::toeplitz::MatrixKind;

type C64 = Complex64;
type Cdd = Complex<TwoFloat>;

/// `|1 - o e|` or `|x - y|` below this makes the identity meaningless.
const SEPARATION_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Below,
    Above,
}

fn dd(z: C64) -> Cdd {
    Cdd::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

fn to_f64(z: Cdd) -> C64 {
    C64::new(z.re.hi() + z.re.lo(), z.im.hi() + z.im.lo())
}

fn vandermonde(x: &[C64]) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for p in 0..x.len() {
        for q in p + 1..x.len() {
            v *= x[p] - x[q];
        }
    }
    v
}

fn check_points(odd: &[C64], even: &[C64], variant: Variant) -> Result<()> {
    let want_odd = match variant {
        Variant::Below => even.len(),
        Variant::Above => even.len() + 1,
    };
    if odd.len() != want_odd || odd.is_empty() {
        return Err(CorrError::DegeneratePoints("point counts do not fit the variant"));
    }
    let distinct = |x: &[C64]| (0..x.len()).all(|p| (p + 1..x.len()).all(|q| (x[p] - x[q]).norm() > SEPARATION_GUARD));
    if !distinct(odd) || !distinct(even) {
        return Err(CorrError::DegeneratePoints("coincident points"));
    }
    let one = C64::new(1.0, 0.0);
    if odd.iter().any(|o| even.iter().any(|e| (one - o * e).norm() < SEPARATION_GUARD)) {
        return Err(CorrError::DegeneratePoints("o e = 1 for some pair"));
    }
    if variant == Variant::Above && odd.iter().any(|o| o.norm() < SEPARATION_GUARD) {
        return Err(CorrError::DegeneratePoints("odd point at the origin"));
    }
    Ok(())
}

/// Left side by explicit signed permutation sum, in double-double.
pub fn permutation_sum(odd: &[C64], even: &[C64], variant: Variant) -> Result<C64> {
    check_points(odd, even, variant)?;
    let one = Cdd::new(TwoFloat::from(1.0), TwoFloat::from(0.0));
    let o: Vec<Cdd> = odd.iter().map(|&z| dd(z)).collect();
    let e: Vec<Cdd> = even.iter().map(|&z| dd(z)).collect();
    let mut acc = Cdd::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
    for (perm, sgn) in permutations(odd.len()) {
        let mut term = one;
        for (q, eq) in e.iter().enumerate() {
            term /= one - o[perm[q]] * eq;
        }
        if variant == Variant::Above {
            term /= o[perm[e.len()]];
        }
        if sgn > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(to_f64(acc))
}

/// Right side in closed product form.
pub fn closed_product(odd: &[C64], even: &[C64], variant: Variant) -> Result<C64> {
    check_points(odd, even, variant)?;
    let one = C64::new(1.0, 0.0);
    let mut denom = C64::new(1.0, 0.0);
    for o in odd {
        for e in even {
            denom *= one - o * e;
        }
        if variant == Variant::Above {
            denom *= o;
        }
    }
    Ok(vandermonde(odd) * vandermonde(even) / denom)
}

/// `|lhs - rhs| / |rhs|`.
pub fn cauchy_identity_residual(odd: &[C64], even: &[C64], variant: Variant) -> Result<f64> {
    let lhs = permutation_sum(odd, even, variant)?;
    let rhs = closed_product(odd, even, variant)?;
    Ok((lhs - rhs).norm() / rhs.norm())
}

/// `x_0^(N)` from the linear solve against `1 + sum_{n<=n_terms} phi^(2n)_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Check {
    pub x0: f64,
    pub partial_sum: f64,
    pub residual: f64,
    /// `|phi^(2 n_terms + 2)_N|`, the first omitted term.
    pub next_term: f64,
}

pub fn lemma1(ctx: &ExpansionContext, n_sep: usize, n_terms: usize) -> Result<Lemma1Check> {
    let x0 = ctx.oracle()?.solve_x(n_sep, MatrixKind::A)?[0];
    let mut partial_sum = 1.0;
    for n in 1..=n_terms {
        partial_sum += ctx.phi(n_sep, n)?.value;
    }
    let next_term = ctx.phi(n_sep, n_terms + 1)?.value.abs();
    Ok(Lemma1Check { x0, partial_sum, residual: (x0 - partial_sum).abs(), next_term })
}

/// `|n phi^(2n)_N - sum_{l=1}^n l Ft^(2l)_N phi^(2n-2l)_N|` with `phi^(0) = 1`.
pub fn lemma2_residual(ctx: &ExpansionContext, n_sep: usize, n: usize) -> Result<f64> {
    let phi: Vec<f64> = std::iter::once(Ok(1.0))
        .chain((1..=n).map(|k| ctx.phi(n_sep, k).map(|t| t.value)))
        .collect::<Result<_>>()?;
    let mut rhs = 0.0;
    for l in 1..=n {
        rhs += l as f64 * ctx.big_f_tilde(n_sep, l)?.value * phi[n - l];
    }
    Ok((n as f64 * phi[n] - rhs).abs())
}
