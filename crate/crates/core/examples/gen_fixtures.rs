//! Regenerates `tests/fixtures/toeplitz_reference.txt`.
//!
//! Each value is accepted only when the quadrature coefficients and the
//! binomial-series coefficients give determinants within 1e-11 of each other.
//!
//!     cargo run -p corr-core --example gen_fixtures > crates/core/tests/fixtures/toeplitz_reference.txt

use corr_core::params::ModelParams;
use corr_core::toeplitz::{fixture::FixtureRecord, series, ToeplitzOracle, ORACLE_NODES};

const POINTS: [(f64, f64); 6] = [(0.0, 0.4), (0.0, 0.5), (0.2, 0.5), (0.1, 0.6), (0.0, 2.5), (0.2, 3.0)];
const AGREEMENT: f64 = 1e-11;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("# alpha1 alpha2 N value est_error route");
    println!("# quadrature: M={ORACLE_NODES} on |z|=1; series: {} terms per factor", series::TERMS);
    println!("# accepted when |quadrature - series| < {AGREEMENT:e}; est_error is that difference");
    for (a1, a2) in POINTS {
        let params = ModelParams::direct(a1, a2)?;
        let oracle = ToeplitzOracle::new(params)?;
        for n in 1..=8 {
            let quad = oracle.det_dn(n)?.value;
            let ser = series::det_dn(&params, n);
            let diff = (quad - ser).abs();
            if diff >= AGREEMENT {
                return Err(format!("routes disagree at alpha=({a1},{a2}) N={n}: {quad} vs {ser}").into());
            }
            let rec = FixtureRecord {
                alpha1: a1,
                alpha2: a2,
                n,
                value: quad,
                est_error: diff,
                route: "quadrature+series".into(),
            };
            println!("{}", rec.to_line());
        }
    }
    Ok(())
}
