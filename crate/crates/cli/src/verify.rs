//! Identity and route-equivalence suites, one JSON record per check.

use corr_core::expansions::identities::{cauchy_identity_residual, lemma1, lemma2_residual, Variant};
use corr_core::fredholm::KernelMatrix;
use corr_core::kernels::{s_hat_infinity, s_infinity};
use corr_core::quadrature::make_grid;
use corr_core::toeplitz::ToeplitzOracle;
use corr_core::{ExpansionContext, Method, ModelParams, Radius};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::VerifyArgs;
use crate::report::{emit, VERSION};
use crate::Exit;

pub const SUITES: [&str; 7] = ["lemma1", "lemma2", "cauchy", "perm", "resum", "fredholm", "szego"];

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub name: String,
    pub params: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Record {
    /// Passes when `residual <= tolerance`; `strict` asks for `<`.
    fn new(name: &str, params: String, residual: f64, tolerance: f64, strict: bool) -> Record {
        let pass = residual.is_finite() && if strict { residual < tolerance } else { residual <= tolerance };
        Record { name: name.into(), params, residual, tolerance, pass }
    }
}

#[derive(Debug, Serialize)]
struct Header {
    tool: &'static str,
    version: &'static str,
    suites: Vec<String>,
    seed: u64,
    trials: usize,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    header: Header,
    records: Vec<Record>,
}

pub fn parse_suites(s: &str) -> Result<Vec<&'static str>, Exit> {
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if name == "all" {
            out.extend(SUITES);
            continue;
        }
        let known = SUITES
            .iter()
            .find(|k| **k == name)
            .ok_or_else(|| Exit::usage(format!("unknown suite `{name}`; expected one of {} or all", SUITES.join(", "))))?;
        out.push(*known);
    }
    if out.is_empty() {
        return Err(Exit::usage("--suite is empty"));
    }
    let mut seen = Vec::new();
    out.retain(|s| {
        let fresh = !seen.contains(s);
        seen.push(*s);
        fresh
    });
    Ok(out)
}

fn ctx(a1: f64, a2: f64, m: usize) -> Result<ExpansionContext, Exit> {
    Ok(ExpansionContext::with_nodes(ModelParams::direct(a1, a2)?, m, Radius::Auto)?)
}

fn lemma1_suite() -> Result<Vec<Record>, Exit> {
    let mut out = Vec::new();
    for a2 in [0.4, 0.6] {
        let c = ctx(0.0, a2, 256)?;
        for n_sep in 1..=5 {
            let l = lemma1(&c, n_sep, 2)?;
            let tol = (10.0 * l.next_term).max(1e-14);
            out.push(Record::new("lemma1", format!("alpha1=0;alpha2={a2};N={n_sep};terms=2;M=256"), l.residual, tol, false));
        }
    }
    Ok(out)
}

fn lemma2_suite() -> Result<Vec<Record>, Exit> {
    let c = ctx(0.0, 0.5, 64)?;
    let mut out = Vec::new();
    for n_sep in 1..=4 {
        for n in 2..=3 {
            let r = lemma2_residual(&c, n_sep, n)?;
            out.push(Record::new("lemma2", format!("alpha1=0;alpha2=0.5;N={n_sep};n={n};M=64"), r, 1e-9, true));
        }
    }
    Ok(out)
}

fn disc(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::from_polar(0.9 * rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>()))
        .collect()
}

/// Random point sets in the disc of radius 0.9; sizes cycle through the
/// supported range so every size gets a third of the trials.
fn identity_suite(name: &str, variant: Variant, trials: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Record>, Exit> {
    let mut out = Vec::with_capacity(trials);
    for t in 0..trials {
        let (odd, even, n) = match variant {
            Variant::Below => {
                let n = 1 + t % 3;
                (disc(rng, n), disc(rng, n), n)
            }
            Variant::Above => {
                let n = t % 3;
                (disc(rng, n + 1), disc(rng, n), n)
            }
        };
        let r = cauchy_identity_residual(&odd, &even, variant)?;
        out.push(Record::new(name, format!("n={n};trial={t}"), r, 1e-12, true));
    }
    Ok(out)
}

fn resum_suite() -> Result<Vec<Record>, Exit> {
    let c = ctx(0.0, 0.5, 64)?;
    let mut out = Vec::new();
    for n_sep in 1..=3 {
        let f: Vec<f64> = (1..=3).map(|n| c.big_f(n_sep, n, false).map(|t| t.value)).collect::<Result<_, _>>()?;
        let want = [f[0], f[1] + 0.5 * f[0] * f[0], f[2] + f[0] * f[1] + f[0].powi(3) / 6.0];
        for (n, w) in (1..=3).zip(want) {
            let got = c.f_even(n_sep, n, false, Method::EigenSymmetric)?.value;
            out.push(Record::new("resum", format!("alpha1=0;alpha2=0.5;N={n_sep};n={n};M=64"), (got - w).abs(), 1e-10, true));
        }
    }
    Ok(out)
}

fn fredholm_suite() -> Result<Vec<Record>, Exit> {
    let mut out = Vec::new();
    for a2 in [0.4, 0.5] {
        let p = ModelParams::direct(0.0, a2)?;
        let c = ctx(0.0, a2, 64)?;
        let grid = make_grid(&p, 64, Radius::Auto)?;
        let s = s_infinity(&p)?;
        for n_sep in 1..=3 {
            let km = KernelMatrix::build(&p, &grid, n_sep, false)?;
            let (ff, route) = km.ff_coeffs(2)?;
            for n in 1..=2 {
                let d = c.f_even(n_sep, n, false, Method::Direct)?.value;
                let params = format!("alpha1=0;alpha2={a2};N={n_sep};n={n};M=64;route={route:?}");
                out.push(Record::new("fredholm.ff_vs_direct", params, (ff[n] - d).abs(), 1e-10, true));
            }
            let det = c.oracle()?.det_dn(n_sep)?.value;
            let v = s * km.log_det_expansion()?.exp();
            let params = format!("alpha1=0;alpha2={a2};N={n_sep};M=64");
            out.push(Record::new("fredholm.logdet_vs_det", params, (v - det).abs(), 1e-7, true));
        }
    }
    Ok(out)
}

/// Each gap must be strictly below the previous one: the record's
/// tolerance is the previous gap.
fn szego_suite() -> Result<Vec<Record>, Exit> {
    let mut out = Vec::new();
    let below = ModelParams::direct(0.0, 0.5)?;
    let o = ToeplitzOracle::new(below)?;
    let s = s_infinity(&below)?;
    let mut prev = (o.det_dn(1)?.value - s).abs();
    for n in 2..=10 {
        let gap = (o.det_dn(n)?.value - s).abs();
        out.push(Record::new("szego.below", format!("alpha1=0;alpha2=0.5;N={n}"), gap, prev, true));
        prev = gap;
    }
    let above = ModelParams::direct(0.0, 2.5)?;
    let o = ToeplitzOracle::new(above)?;
    let s = s_hat_infinity(&above)?;
    let signed = |n: usize| -> Result<f64, Exit> {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok((sign * o.det_dhat_n(n)?.value - s).abs())
    };
    let mut prev = signed(1)?;
    for n in 2..=10 {
        let gap = signed(n)?;
        out.push(Record::new("szego.above", format!("alpha1=0;alpha2=2.5;N={n}"), gap, prev, true));
        prev = gap;
    }
    Ok(out)
}

pub fn records(suites: &[&str], trials: usize, seed: u64) -> Result<Vec<Record>, Exit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for suite in suites {
        out.extend(match *suite {
            "lemma1" => lemma1_suite()?,
            "lemma2" => lemma2_suite()?,
            "cauchy" => identity_suite("cauchy", Variant::Below, trials, &mut rng)?,
            "perm" => identity_suite("perm", Variant::Above, trials, &mut rng)?,
            "resum" => resum_suite()?,
            "fredholm" => fredholm_suite()?,
            "szego" => szego_suite()?,
            other => unreachable!("suite `{other}` passed parse_suites"),
        });
    }
    Ok(out)
}

pub fn run(args: &VerifyArgs) -> Result<(), Exit> {
    let suites = parse_suites(&args.suite)?;
    if args.trials == 0 {
        return Err(Exit::usage("--trials must be positive"));
    }
    let records = records(&suites, args.trials, args.seed)?;
    let failed = records.iter().filter(|r| !r.pass).count();
    let report = VerifyReport {
        header: Header {
            tool: "corr",
            version: VERSION,
            suites: suites.iter().map(|s| s.to_string()).collect(),
            seed: args.seed,
            trials: args.trials,
        },
        records,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    emit(&text, args.out.as_deref())?;
    eprintln!("{} of {} checks passed", report.records.len() - failed, report.records.len());
    if failed > 0 {
        return Err(Exit { code: 1, message: format!("{failed} checks failed") });
    }
    Ok(())
}
