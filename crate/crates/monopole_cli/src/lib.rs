//! Command-line front end: continuation sweeps, period data, the elliptic
//! AGM and the theta-flow scan, with CSV / JSON / plain-column output.

// Negated comparisons are used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("I/O: {0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
    /// A re-verified invariant failed; the report has been printed.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "monopole-agm", version, about = "Genus-2 periods by Richelot's AGM and charge-3 monopole curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Arithmetic-geometric mean M(a, b) and K = π/(2M).
    #[command(allow_negative_numbers = true)]
    Agm {
        a: f64,
        b: f64,
        /// Relative stopping tolerance.
        #[arg(long, default_value_t = f64::EPSILON)]
        tol: f64,
    },
    /// Continuation sweep of the constraint locus; writes CSV and a JSON manifest.
    #[command(allow_negative_numbers = true)]
    Solve(RunArgs),
    /// Branch points, period matrix and Abel characteristics of one curve.
    #[command(allow_negative_numbers = true)]
    Periods {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        g: f64,
        /// Also print the integer identities of the involution matrix.
        #[arg(long)]
        check_involution: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Solve at `a` and scan the three theta factors along the flow.
    #[command(name = "theta-scan", allow_negative_numbers = true)]
    ThetaScan {
        #[arg(long)]
        a: f64,
        #[command(flatten)]
        run: RunArgs,
    },
}

/// Flags shared by the run commands; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub a_min: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub step_fine: Option<f64>,
    /// Integer set `n0,n,m0,m`.
    #[arg(long)]
    pub intset: Option<String>,
    #[arg(long)]
    pub tol_residual: Option<f64>,
    #[arg(long)]
    pub tol_quad: Option<f64>,
    /// Number of flow points for `theta-scan`.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Flat `key = value` file with any of the settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Period evaluator: auto, agm or oracle.
    #[arg(long)]
    pub method: Option<String>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<config::RunConfig, CliError> {
        let mut cfg = config::RunConfig::default();
        if let Some(p) = &self.config {
            cfg.apply_file(p)?;
        }
        let pairs: [(&str, Option<String>); 10] = [
            ("a_min", self.a_min.map(|v| v.to_string())),
            ("a_max", self.a_max.map(|v| v.to_string())),
            ("step", self.step.map(|v| v.to_string())),
            ("step_fine", self.step_fine.map(|v| v.to_string())),
            ("intset", self.intset.clone()),
            ("tol_residual", self.tol_residual.map(|v| v.to_string())),
            ("tol_quad", self.tol_quad.map(|v| v.to_string())),
            ("grid", self.grid.map(|v| v.to_string())),
            ("out_dir", self.out_dir.as_ref().map(|p| p.display().to_string())),
            ("method", self.method.clone()),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs a parsed command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    match cli.command {
        Command::Agm { a, b, tol } => commands::cmd_agm(a, b, tol, out),
        Command::Solve(args) => commands::cmd_solve(&args.resolve()?, out).map(|_| ()),
        Command::Periods { a, g, check_involution, run } => {
            commands::cmd_periods(a, g, check_involution, &run.resolve()?, out)
        }
        Command::ThetaScan { a, run } => commands::cmd_theta_scan(a, &run.resolve()?, out).map(|_| ()),
    }
}
