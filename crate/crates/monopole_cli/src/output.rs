//! File formats: the solution CSV, JSON manifests and whitespace-delimited
//! plot columns. Floats use Rust's shortest round-trip formatting so that
//! identical runs give identical bytes.

use crate::config::RunConfig;
use crate::CliError;
use monopole_agm::es_solver::{SolutionPoint, StopReason};
use monopole_agm::theta::H3Scan;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// Column order of the solution table.
pub const CSV_HEADER: [&str; 6] = ["a", "g", "beta", "alpha", "gamma", "residual_abs"];

pub const SHEET_ANCHOR: &str = "sheet 1 has Y > 0 on the real axis to the right of all branch points; \
     cuts B6-B5, B4-B3, B2-B1 (B1, B2, B3 in the lower half-plane ordered by decreasing real part, B(7-j) = conj(Bj))";

pub const ORIENTATION: &str = "c = n0*a0 + 3n*a1 + 3m0*b0 + 3m*b1; a0, a1, b0, b1 as sheet-1 branch-pair sums; \
     beta = (oint_c X dX/Y / 6)^3 reported with its sign (negative on the g > 0 branch of 4,1,-3,1)";

#[derive(Serialize)]
struct Row {
    a: f64,
    g: f64,
    beta: f64,
    alpha: f64,
    gamma: f64,
    residual_abs: f64,
}

pub fn write_solutions_csv(path: &Path, points: &[SolutionPoint]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    for p in points {
        let row = Row { a: p.a, g: p.g, beta: p.beta, alpha: p.alpha, gamma: p.gamma, residual_abs: p.residual_abs() };
        w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
pub struct Conventions {
    pub sheet_anchor: &'static str,
    pub orientation: &'static str,
}

impl Conventions {
    pub fn current() -> Self {
        Self { sheet_anchor: SHEET_ANCHOR, orientation: ORIENTATION }
    }
}

#[derive(Serialize)]
pub struct SeedPoint {
    pub a: f64,
    pub g: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

pub fn stop_text(s: &StopReason) -> String {
    match s {
        StopReason::Completed => "completed".into(),
        StopReason::Degenerate { a, detail } => format!("stopped before a = {a}: degenerate curve ({detail})"),
        StopReason::Stalled { a, detail } => format!("stalled at a = {a}: {detail}"),
        StopReason::Jump { a, g, expected } => {
            format!("aborted at a = {a}: g = {g} jumps by more than 10 x the local estimate {expected:.3e}")
        }
    }
}

#[derive(Serialize)]
pub struct SweepSummary {
    pub points: usize,
    pub upper: String,
    pub lower: String,
}

#[derive(Serialize)]
pub struct Manifest<'a, R: Serialize> {
    pub config: &'a RunConfig,
    pub seed_point: SeedPoint,
    pub intset: String,
    pub conventions: Conventions,
    pub tool_version: &'static str,
    pub result: R,
}

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// One file per factor `k` with columns `lambda re im abs`, preceded by `#`
/// lines carrying the run configuration and conventions.
pub fn write_theta_columns(dir: &Path, scan: &H3Scan, header: &str) -> Result<Vec<std::path::PathBuf>, CliError> {
    let mut paths = Vec::new();
    for k in 0..3 {
        let path = dir.join(format!("theta_k{k}.dat"));
        let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
        for line in header.lines() {
            writeln!(f, "# {line}")?;
        }
        writeln!(f, "# factor k = {k}: theta[0 0; {k}/3 0](lambda U - K_inf + e)")?;
        writeln!(f, "# lambda re im abs")?;
        for p in &scan.points {
            let v = p.values[k];
            writeln!(f, "{} {} {} {}", p.lambda, v.re, v.im, v.norm())?;
        }
        f.flush()?;
        paths.push(path);
    }
    Ok(paths)
}
