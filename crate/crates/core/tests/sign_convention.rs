//! Above the critical point the form factor sum carries the prefactor
//! `+S^_inf`. Writing it with a leading minus gives the negative of the
//! determinant, for every separation.

use corr_core::kernels::s_hat_infinity;
use corr_core::params::ModelParams;
use corr_core::{ExpansionContext, Method, Radius};

#[test]
fn leading_minus_contradicts_the_determinant() {
    for (a1, a2) in [(0.0, 2.5), (0.2, 3.0)] {
        let p = ModelParams::direct(a1, a2).unwrap();
        let ctx = ExpansionContext::with_nodes(p, 64, Radius::Auto).unwrap();
        let s = s_hat_infinity(&p).unwrap();
        for n_sep in 1..=5 {
            let det = ctx.oracle().unwrap().det_dn(n_sep).unwrap().value;
            let sum: f64 = (0..=2).map(|n| ctx.f_odd(n_sep, n, Method::Combination).unwrap().value).sum();
            assert!(det > 0.0);
            assert!((s * sum - det).abs() < 1e-6);
            assert!((-s * sum - det).abs() > det);
        }
    }
}

#[test]
fn constant_factor_on_the_symbol_scales_as_power() {
    // det of c * T_N is c^N det T_N, so the sign flip cannot be absorbed
    // into a branch choice that holds for all N
    let p = ModelParams::direct(0.0, 2.5).unwrap();
    let ctx = ExpansionContext::with_nodes(p, 64, Radius::Auto).unwrap();
    let o = ctx.oracle().unwrap();
    for n in 1..=4 {
        let a = o.matrix(n, corr_core::toeplitz::MatrixKind::A);
        let flipped = corr_core::linalg::determinant(&(-a.clone())).unwrap();
        let d = corr_core::linalg::determinant(&a).unwrap();
        let want = if n % 2 == 0 { d } else { -d };
        assert!((flipped - want).norm() < 1e-15);
    }
}
