use corr_core::expansions::combinatorics::resum;
use corr_core::fredholm::KernelMatrix;
use corr_core::kernels::{s_infinity, KernelSet};
use corr_core::params::ModelParams;
use corr_core::quadrature::{chain_integral, make_grid, Chain};
use corr_core::{ExpansionContext, Method, Radius};

fn kernel(a1: f64, a2: f64, m: usize, n_sep: usize) -> (ModelParams, KernelMatrix) {
    let p = ModelParams::direct(a1, a2).unwrap();
    let g = make_grid(&p, m, Radius::Auto).unwrap();
    (p, KernelMatrix::build(&p, &g, n_sep, false).unwrap())
}

#[test]
fn traces_against_chain_engine() {
    let p = ModelParams::direct(0.0, 0.5).unwrap();
    let g = make_grid(&p, 64, Radius::Auto).unwrap();
    let k = KernelSet::new(p);
    let qq = g.sample(|z| k.qq(z)).unwrap();
    let pp = g.sample(|z| k.pp(z)).unwrap();
    let km = KernelMatrix::build(&p, &g, 2, false).unwrap();
    let tr = km.traces(2);
    let c1 = chain_integral(&g, &Chain::closed(1, 2, &qq, &pp)).unwrap();
    let c2 = chain_integral(&g, &Chain::closed(2, 2, &qq, &pp)).unwrap();
    assert!((tr[0] - c1).norm() < 1e-12);
    assert!((tr[1] - c2).norm() < 1e-11);
}

#[test]
fn degenerate_kernel_gives_vanishing_exponents() {
    let p = ModelParams::degenerate(0.2).unwrap();
    let g = make_grid(&p, 64, Radius::Auto).unwrap();
    let km = KernelMatrix::build(&p, &g, 2, false).unwrap();
    for f in km.exp_coeffs(4) {
        assert!(f.abs() < 1e-13);
    }
}

#[test]
fn log_det_times_szego_is_the_determinant() {
    let (p, km) = kernel(0.0, 0.5, 64, 3);
    let ctx = ExpansionContext::with_nodes(p, 64, Radius::Auto).unwrap();
    let det = ctx.oracle().unwrap().det_dn(3).unwrap().value;
    let v = s_infinity(&p).unwrap() * km.log_det_expansion().unwrap().exp();
    assert!((v - det).abs() < 1e-8);
    assert!(km.spectral_radius().unwrap() < 1.0);
}

#[test]
fn form_factor_coefficients_against_direct_quadrature() {
    for a2 in [0.4, 0.5] {
        let ctx = ExpansionContext::with_nodes(ModelParams::direct(0.0, a2).unwrap(), 64, Radius::Auto).unwrap();
        for n_sep in 1..=3 {
            let (_, km) = kernel(0.0, a2, 64, n_sep);
            let (ff, _) = km.ff_coeffs(3).unwrap();
            assert_eq!(ff[0], 1.0);
            for n in 1..=2 {
                let d = ctx.f_even(n_sep, n, false, Method::Direct).unwrap().value;
                assert!((ff[n] - d).abs() < 1e-10, "a2={a2} N={n_sep} n={n}");
            }
            // n = 3 has no direct quadrature; compare with the regrouped exponents
            let f = resum(&km.exp_coeffs(3)).unwrap();
            assert!((ff[3] - f[3]).abs() < 1e-10);
        }
    }
}

#[test]
fn exponential_and_series_duality() {
    // the truncations differ at order 4, whose size is set by F^(8)
    let (_, km) = kernel(0.0, 0.5, 64, 1);
    let (ff, _) = km.ff_coeffs(6).unwrap();
    let big_f = km.exp_coeffs(6);
    let exp: f64 = big_f[..3].iter().sum::<f64>().exp();
    let series: f64 = ff[..=3].iter().sum();
    assert!((exp - series).abs() <= 2.0 * (big_f[3].abs() + ff[4].abs()), "{exp} {series}");
    let full: f64 = ff.iter().sum();
    assert!((km.log_det_expansion().unwrap().exp() - full).abs() < 1e-14);
}

#[test]
fn elementary_functions_from_spectrum_and_charpoly() {
    for m in [16, 32, 64] {
        let (_, km) = kernel(0.2, 0.5, m, 1);
        let a = km.elementary_from_eigenvalues(5).unwrap();
        let b = km.elementary_from_charpoly(5).unwrap();
        for n in 0..=5 {
            assert!((a[n] - b[n]).norm() < 1e-10, "M={m} n={n}");
        }
    }
}

#[test]
fn spectral_radius_guard() {
    // a kernel scaled past the unit disc is rejected by the log-det route
    let (_, km) = kernel(0.0, 0.5, 32, 0);
    assert!(km.spectral_radius().unwrap() < 1.0);
    assert!(km.ff_coeffs(40).is_err());
}
