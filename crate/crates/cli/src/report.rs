//! JSON documents written by `verify`, `conjugate` and `deform`. Field order
//! in the structs below is the key order in the output.

use iso_zmc::catalog::LimitRow;
use iso_zmc::diffgeo::{CheckRecord, VerificationReport};
use serde::Serialize;

use crate::config::{DeformKind, JobConfig};
use crate::error::CliError;

pub const TOOL: &str = "iso-zmc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct VerifyDocument<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub job: &'a JobConfig,
    pub family: &'a str,
    pub grid_points: usize,
    pub seed: u64,
    pub checks: &'a [CheckRecord],
    pub excluded: &'a [[f64; 2]],
    pub pass: bool,
}

impl<'a> VerifyDocument<'a> {
    pub fn new(job: &'a JobConfig, r: &'a VerificationReport) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            command: "verify",
            job,
            family: &r.family,
            grid_points: r.grid_points,
            seed: r.seed,
            checks: &r.checks,
            excluded: &r.excluded,
            pass: r.pass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ConjugateDocument<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub job: &'a JobConfig,
    pub family: String,
    pub conjugate: String,
    pub pairing: Vec<CheckRecord>,
    pub original: &'a VerificationReport,
    pub conjugated: &'a VerificationReport,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Frame {
    pub index: usize,
    pub param: f64,
    pub family: String,
    pub mesh: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub param: f64,
    pub h_deviation: f64,
    pub eta_deviation: f64,
    /// `max |X_α - X₀|` on `[-1, 1]²`, tanh path only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_deviation: Option<f64>,
}

impl From<LimitRow> for ConvergenceRow {
    fn from(r: LimitRow) -> Self {
        Self {
            param: r.param,
            h_deviation: r.h_deviation,
            eta_deviation: r.eta_deviation,
            x_deviation: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub limit: String,
    pub rows: Vec<ConvergenceRow>,
    /// Successive ratios of the `h` deviations.
    pub h_ratios: Vec<f64>,
    pub eta_ratios: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub x_ratios: Vec<f64>,
    pub monotone: bool,
}

#[derive(Debug, Serialize)]
pub struct DeformDocument<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub path: DeformKind,
    pub job: &'a JobConfig,
    pub frames: Vec<Frame>,
    pub tables: Vec<ConvergenceTable>,
    pub pass: bool,
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| CliError::Usage(format!("cannot encode report: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Plain-text rendering for the terminal.
pub fn render_table(t: &ConvergenceTable) -> String {
    use std::fmt::Write as _;
    let mut out = format!("{}\n", t.limit);
    let with_x = t.rows.iter().any(|r| r.x_deviation.is_some());
    let _ = write!(out, "{:>14} {:>14} {:>14}", "param", "|h - h0|", "|eta - eta0|");
    if with_x {
        let _ = write!(out, " {:>14}", "|X - X0|");
    }
    out.push('\n');
    for r in &t.rows {
        let _ = write!(out, "{:>14.6e} {:>14.6e} {:>14.6e}", r.param, r.h_deviation, r.eta_deviation);
        if let Some(x) = r.x_deviation {
            let _ = write!(out, " {x:>14.6e}");
        }
        out.push('\n');
    }
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "ratios h: {}", fmt(&t.h_ratios));
    let _ = writeln!(out, "ratios eta: {}", fmt(&t.eta_ratios));
    if !t.x_ratios.is_empty() {
        let _ = writeln!(out, "ratios X: {}", fmt(&t.x_ratios));
    }
    out
}
