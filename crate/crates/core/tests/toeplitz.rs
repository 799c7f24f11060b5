use corr_core::kernels::{s_hat_infinity, s_infinity};
use corr_core::params::ModelParams;
use corr_core::toeplitz::{fixture, series, MatrixKind, Symbol, ToeplitzOracle};

const FIXTURE: &str = include_str!("fixtures/toeplitz_reference.txt");

#[test]
fn frozen_reference_values() {
    let records = fixture::parse(FIXTURE).unwrap();
    assert_eq!(records.len(), 48);
    for rec in records {
        let p = ModelParams::direct(rec.alpha1, rec.alpha2).unwrap();
        let d = ToeplitzOracle::new(p).unwrap().det_dn(rec.n).unwrap();
        assert!((d.value - rec.value).abs() < 1e-12, "{rec:?} got {}", d.value);
        assert!(d.imag_residue < 1e-14);
    }
}

#[test]
fn series_and_quadrature_coefficients_agree() {
    for (a1, a2) in [(0.0, 0.4), (0.2, 0.5), (0.0, 2.5), (0.2, 3.0)] {
        let p = ModelParams::direct(a1, a2).unwrap();
        let o = ToeplitzOracle::new(p).unwrap();
        for n in -10..=10 {
            let q = o.fourier_coeff(n, Symbol::Phi);
            assert!((q.re - series::coefficient(&p, n)).abs() < 1e-12, "({a1},{a2}) n={n}");
        }
        for n in 1..=6 {
            assert!((o.det_dn(n).unwrap().value - series::det_dn(&p, n)).abs() < 1e-11);
        }
    }
}

#[test]
fn cramer_consistency() {
    for (a1, a2) in [(0.0, 0.5), (0.2, 0.5), (0.0, 2.5), (0.2, 3.0)] {
        let o = ToeplitzOracle::new(ModelParams::direct(a1, a2).unwrap()).unwrap();
        for n in 1..=8 {
            let x0 = o.solve_x(n, MatrixKind::A).unwrap()[0];
            let lhs = x0 * o.det_dn(n + 1).unwrap().value;
            let rhs = o.det_dn(n).unwrap().value;
            assert!((lhs - rhs).abs() < 1e-10 * rhs.abs(), "({a1},{a2}) N={n}");
        }
    }
}

#[test]
fn szego_limit_below_is_approached_monotonically() {
    for (a1, a2) in [(0.0, 0.4), (0.0, 0.5), (0.2, 0.5), (0.1, 0.6)] {
        let p = ModelParams::direct(a1, a2).unwrap();
        let o = ToeplitzOracle::new(p).unwrap();
        let s = s_infinity(&p).unwrap();
        let gaps: Vec<f64> = (2..=10).map(|n| (o.det_dn(n).unwrap().value - s).abs()).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "({a1},{a2}) {gaps:?}");
    }
}

#[test]
fn szego_limit_above_uses_product_constant() {
    // (-1)^N Dhat_N approaches the product constant also when alpha1 > 0
    for (a1, a2) in [(0.0, 2.5), (0.2, 3.0)] {
        let p = ModelParams::direct(a1, a2).unwrap();
        let o = ToeplitzOracle::new(p).unwrap();
        let s = s_hat_infinity(&p).unwrap();
        let n = 24;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!((sign * o.det_dhat_n(n).unwrap().value - s).abs() < 1e-9, "({a1},{a2})");
    }
}

#[test]
fn removing_first_row_and_last_column_of_b() {
    let o = ToeplitzOracle::new(ModelParams::direct(0.2, 3.0).unwrap()).unwrap();
    for n in 1..=10 {
        let b = o.matrix(n + 1, MatrixKind::B);
        let a = o.matrix(n, MatrixKind::A);
        let minor = b.remove_row(0).remove_column(n);
        assert_eq!(minor, a);
    }
}

#[test]
fn solution_ratios() {
    let o = ToeplitzOracle::new(ModelParams::direct(0.2, 0.5).unwrap()).unwrap();
    for n in 1..=6 {
        let x0 = o.solve_x(n, MatrixKind::A).unwrap()[0];
        let ratio = o.det_dn(n).unwrap().value / o.det_dn(n + 1).unwrap().value;
        assert!((x0 - ratio).abs() < 1e-11);
    }
    let o = ToeplitzOracle::new(ModelParams::direct(0.2, 3.0).unwrap()).unwrap();
    for n in 1..=6 {
        let xn = o.solve_x(n, MatrixKind::B).unwrap()[n];
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let ratio = o.det_dn(n).unwrap().value / o.det_dhat_n(n + 1).unwrap().value;
        assert!((sign * xn - ratio).abs() < 1e-10);
    }
}

#[test]
fn oracle_is_shareable_across_threads() {
    let o = ToeplitzOracle::new(ModelParams::direct(0.0, 0.5).unwrap()).unwrap();
    let want: Vec<f64> = (1..=6).map(|n| o.det_dn(n).unwrap().value).collect();
    let fresh = ToeplitzOracle::new(ModelParams::direct(0.0, 0.5).unwrap()).unwrap();
    std::thread::scope(|s| {
        let handles: Vec<_> = (1..=6).map(|n| {
            let f = &fresh;
            s.spawn(move || f.det_dn(n).unwrap().value)
        }).collect();
        for (h, w) in handles.into_iter().zip(&want) {
            assert_eq!(h.join().unwrap(), *w);
        }
    });
}
