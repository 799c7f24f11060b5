use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use corr_core::{ContourGrid, CorrelationKind, ModelParams, Radius, Route};

use crate::Exit;

#[derive(Parser, Debug)]
#[command(name = "corr", version, about = "Ising row and diagonal correlations by three routes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Correlation table across separations, one row per (N, route).
    #[command(args_override_self = true)]
    Table(TableArgs),
    /// Run the identity and route-equivalence suites.
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
    /// Convergence study over node counts or expansion orders.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
}

/// Exactly one style: `--K1/--K2` with `--row` or `--diagonal`,
/// `--diagonal --alpha2`, or `--direct A1 A2`.
#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long = "K1")]
    pub k1: Option<f64>,
    #[arg(long = "K2")]
    pub k2: Option<f64>,
    #[arg(long)]
    pub row: bool,
    #[arg(long)]
    pub diagonal: bool,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["ALPHA1", "ALPHA2"])]
    pub direct: Option<Vec<f64>>,
}

/// Names of the flags that select the parameter style, as used in config files.
pub const PARAM_KEYS: [&str; 6] = ["K1", "K2", "row", "diagonal", "alpha2", "direct"];

impl ParamArgs {
    pub fn resolve(&self) -> Result<ModelParams, Exit> {
        let couplings = self.k1.is_some() || self.k2.is_some();
        let styles = [couplings, self.alpha2.is_some(), self.direct.is_some()];
        if styles.iter().filter(|s| **s).count() != 1 {
            return Err(Exit::usage(
                "give exactly one parameter style: --K1/--K2 with --row or --diagonal, --diagonal --alpha2, or --direct A1 A2",
            ));
        }
        if couplings {
            let (Some(k1), Some(k2)) = (self.k1, self.k2) else {
                return Err(Exit::usage("--K1 and --K2 must be given together"));
            };
            let kind = match (self.row, self.diagonal) {
                (true, false) => CorrelationKind::Row,
                (false, true) => CorrelationKind::Diagonal,
                _ => return Err(Exit::usage("couplings need exactly one of --row or --diagonal")),
            };
            return Ok(ModelParams::from_couplings(kind, k1, k2)?);
        }
        if let Some(a2) = self.alpha2 {
            if !self.diagonal || self.row {
                return Err(Exit::usage("--alpha2 is only valid together with --diagonal"));
            }
            return Ok(ModelParams::diagonal_from_alpha2(a2)?);
        }
        if self.row || self.diagonal {
            return Err(Exit::usage("--direct does not combine with --row or --diagonal"));
        }
        let d = self.direct.as_deref().unwrap_or_default();
        Ok(ModelParams::direct(d[0], d[1])?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Quadrature nodes per contour (power of two, at least 8).
    #[arg(long = "M", default_value_t = 64)]
    pub m: usize,
    /// Contour radius, or `auto` for the midpoint of the analyticity annulus.
    #[arg(long, default_value = "auto")]
    pub radius: String,
}

impl GridArgs {
    pub fn radius(&self) -> Result<Radius, Exit> {
        if self.radius == "auto" {
            return Ok(Radius::Auto);
        }
        self.radius
            .parse::<f64>()
            .map(Radius::Fixed)
            .map_err(|_| Exit::usage(format!("--radius expects `auto` or a number, got `{}`", self.radius)))
    }

    pub fn grid(&self, params: &ModelParams, m: usize) -> Result<ContourGrid, Exit> {
        Ok(corr_core::quadrature::make_grid(params, m, self.radius()?)?)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Separations, `a..b` (inclusive) or a single value, within 1..64.
    #[arg(long = "N", default_value = "1..6")]
    pub n: String,
    /// Expansion index n_max (0..=3).
    #[arg(long, default_value_t = 2)]
    pub orders: usize,
    /// Comma-separated subset of det,exp,ff; det is added when missing.
    #[arg(long, default_value = "det,exp,ff")]
    pub routes: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Exit 3 if any expansion row has est_error above this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `key = value` file with flag names as keys; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long = "N", default_value = "3")]
    pub n: String,
    #[arg(long, default_value_t = 2)]
    pub orders: usize,
    #[arg(long, default_value = "exp")]
    pub routes: String,
    /// Node counts to sweep, e.g. 16,32,64,128.
    #[arg(long = "M-list")]
    pub m_list: Option<String>,
    /// Expansion indices to sweep, e.g. 1,2,3.
    #[arg(long = "order-list")]
    pub order_list: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated subset of lemma1,lemma2,cauchy,perm,resum,fredholm,szego, or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Random point sets for the cauchy and perm suites.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub const MAX_SEPARATION: usize = 64;

pub fn parse_separations(s: &str) -> Result<Vec<usize>, Exit> {
    let bad = || Exit::usage(format!("--N expects `a..b` or a single value in 1..{MAX_SEPARATION}, got `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse::<usize>().map_err(|_| bad())?, b.trim().parse::<usize>().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse::<usize>().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || hi > MAX_SEPARATION || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// Routes in report order, deduplicated.
pub fn parse_routes(s: &str) -> Result<Vec<Route>, Exit> {
    let mut routes = Vec::new();
    for name in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        routes.push(match name {
            "det" => Route::Determinant,
            "exp" => Route::Exponential,
            "ff" => Route::FormFactor,
            other => return Err(Exit::usage(format!("unknown route `{other}`; expected det, exp or ff"))),
        });
    }
    if routes.is_empty() {
        return Err(Exit::usage("--routes is empty"));
    }
    routes.sort();
    routes.dedup();
    Ok(routes)
}

pub fn parse_list(flag: &str, s: &str) -> Result<Vec<usize>, Exit> {
    let items: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if items.is_empty() {
        return Err(Exit::usage(format!("{flag} is empty")));
    }
    items
        .iter()
        .map(|t| t.parse::<usize>().map_err(|_| Exit::usage(format!("{flag}: `{t}` is not a non-negative integer"))))
        .collect()
}
