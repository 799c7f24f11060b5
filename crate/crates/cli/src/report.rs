//! Report records and their CSV / JSON renderings.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use corr_core::{ComparisonEntry, ContourGrid, ModelParams, Regime};
use serde::Serialize;

use crate::Exit;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CSV_COLUMNS: &str = "N,route,value,est_error,M,n_max";
pub const EST_ERROR_NOTE: &str = "heuristic: last included term plus coarse-grid difference";

#[derive(Debug, Clone, Serialize)]
pub struct ParamsInfo {
    pub kind: String,
    pub alpha1: f64,
    pub alpha2: f64,
    #[serde(rename = "K1")]
    pub k1: Option<f64>,
    #[serde(rename = "K2")]
    pub k2: Option<f64>,
    pub regime: String,
}

impl ParamsInfo {
    pub fn of(p: &ModelParams) -> ParamsInfo {
        ParamsInfo {
            kind: format!("{:?}", p.kind()).to_lowercase(),
            alpha1: p.alpha1(),
            alpha2: p.alpha2(),
            k1: p.k1(),
            k2: p.k2(),
            regime: match p.regime() {
                Regime::Below => "below".into(),
                Regime::Above => "above".into(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    #[serde(rename = "M")]
    pub m: usize,
    pub radius: f64,
}

impl GridInfo {
    pub fn of(g: &ContourGrid) -> GridInfo {
        GridInfo { m: g.m(), radius: g.radius() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub params: ParamsInfo,
    pub grid: GridInfo,
    pub n_max: usize,
    pub est_error: String,
    pub generated_unix: u64,
}

impl Header {
    pub fn new(params: &ModelParams, grid: &ContourGrid, n_max: usize) -> Header {
        Header {
            tool: "corr".into(),
            version: VERSION.into(),
            params: ParamsInfo::of(params),
            grid: GridInfo::of(grid),
            n_max,
            est_error: EST_ERROR_NOTE.into(),
            generated_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        }
    }

    /// The first two comment lines of every CSV output.
    pub fn csv_lines(&self, params: &ModelParams) -> String {
        format!(
            "# corr v{} params={} grid=M={};r={} n_max={} est_error={}\n# generated_unix={}\n",
            self.version, params, self.grid.m, self.grid.radius, self.n_max, self.est_error, self.generated_unix
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TermSummary {
    pub order: usize,
    pub value: f64,
    pub est_error: f64,
    pub method: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    #[serde(rename = "N")]
    pub n: usize,
    pub route: String,
    pub value: f64,
    pub est_error: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub n_max: usize,
    pub terms: Vec<TermSummary>,
}

impl Row {
    pub fn of(e: &ComparisonEntry, m: usize) -> Row {
        Row {
            n: e.n_sep,
            route: e.route.short_name().into(),
            value: e.value,
            est_error: e.est_error,
            m,
            n_max: e.n_max,
            terms: e
                .terms
                .iter()
                .map(|t| TermSummary {
                    order: t.order,
                    value: t.value,
                    est_error: t.est_error,
                    method: format!("{:?}", t.method),
                })
                .collect(),
        }
    }

    pub fn csv(&self) -> String {
        format!("{},{},{:.16e},{:.16e},{},{}", self.n, self.route, self.value, self.est_error, self.m, self.n_max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub header: Header,
    pub rows: Vec<Row>,
}

impl ComparisonReport {
    pub fn to_csv(&self, params: &ModelParams) -> String {
        let mut s = self.header.csv_lines(params);
        s.push_str(CSV_COLUMNS);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.csv());
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), Exit> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Exit::usage(format!("cannot write `{}`: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Exit { code: 1, message: format!("cannot write to stdout: {e}") })
        }
    }
}
