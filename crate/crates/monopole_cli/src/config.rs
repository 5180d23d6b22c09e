//! Run configuration: defaults, a flat `key = value` file, and command-line
//! overrides, applied in that order.

use crate::CliError;
use monopole_agm::es_solver::{tetrahedral_seed, SolverOptions, SweepConfig};
use monopole_agm::monopole_curve::{EvalOptions, IntSet, PeriodMethod};
use monopole_agm::quadrature::DEFAULT_TOL;
use monopole_agm::richelot::DEFAULT_MIN_CONDITION;
use monopole_agm::theta::DEFAULT_THETA_TOL;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub a_min: f64,
    pub a_max: f64,
    pub step: f64,
    pub step_fine: f64,
    pub fine_from: f64,
    pub intset: String,
    pub tol_residual: f64,
    pub tol_quad: f64,
    pub tol_g: f64,
    pub tol_theta: f64,
    pub min_condition: f64,
    pub method: String,
    pub verify: bool,
    pub grid: usize,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            a_min: -15.0,
            a_max: 2.99,
            step: 0.1,
            step_fine: 0.01,
            fine_from: 2.8,
            intset: IntSet::PLUS.to_string(),
            tol_residual: 1e-8,
            tol_quad: DEFAULT_TOL,
            tol_g: 1e-10,
            tol_theta: DEFAULT_THETA_TOL,
            min_condition: DEFAULT_MIN_CONDITION,
            method: PeriodMethod::Auto.name().to_string(),
            verify: true,
            grid: 400,
            out_dir: PathBuf::from("out"),
        }
    }
}

/// Every key accepted in a config file; flags use the same names with `-`.
pub const KEYS: [&str; 15] = [
    "a_min",
    "a_max",
    "step",
    "step_fine",
    "fine_from",
    "intset",
    "tol_residual",
    "tol_quad",
    "tol_g",
    "tol_theta",
    "min_condition",
    "method",
    "verify",
    "grid",
    "out_dir",
];

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Usage(format!("invalid value {v:?} for {key}")))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        match key.as_str() {
            "a_min" => self.a_min = parse(&key, v)?,
            "a_max" => self.a_max = parse(&key, v)?,
            "step" => self.step = parse(&key, v)?,
            "step_fine" => self.step_fine = parse(&key, v)?,
            "fine_from" => self.fine_from = parse(&key, v)?,
            "intset" => self.intset = v.to_string(),
            "tol_residual" => self.tol_residual = parse(&key, v)?,
            "tol_quad" => self.tol_quad = parse(&key, v)?,
            "tol_g" => self.tol_g = parse(&key, v)?,
            "tol_theta" => self.tol_theta = parse(&key, v)?,
            "min_condition" => self.min_condition = parse(&key, v)?,
            "method" => self.method = v.to_string(),
            "verify" => self.verify = parse(&key, v)?,
            "grid" => self.grid = parse(&key, v)?,
            "out_dir" => self.out_dir = PathBuf::from(v),
            _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` text (`#` starts a comment).
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value, got {raw:?}", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn intset(&self) -> Result<IntSet, CliError> {
        self.intset.parse().map_err(|e| CliError::Usage(format!("--intset: {e}")))
    }

    pub fn method(&self) -> Result<PeriodMethod, CliError> {
        match self.method.as_str() {
            "auto" => Ok(PeriodMethod::Auto),
            "agm" => Ok(PeriodMethod::Agm),
            "oracle" => Ok(PeriodMethod::Oracle),
            m => Err(CliError::Usage(format!("unknown method {m:?} (auto, agm, oracle)"))),
        }
    }

    /// Positivity of tolerances and steps, ordered bounds, and a residual
    /// tolerance at least ten times the quadrature tolerance.
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("step", self.step),
            ("step_fine", self.step_fine),
            ("tol_residual", self.tol_residual),
            ("tol_quad", self.tol_quad),
            ("tol_g", self.tol_g),
            ("tol_theta", self.tol_theta),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.a_min <= self.a_max) {
            return Err(CliError::Usage(format!("a_min = {} exceeds a_max = {}", self.a_min, self.a_max)));
        }
        if self.tol_residual < 10.0 * self.tol_quad {
            return Err(CliError::Usage(format!(
                "tol_residual = {} must be at least 10 × tol_quad = {}",
                self.tol_residual, self.tol_quad
            )));
        }
        if self.grid < 3 {
            return Err(CliError::Usage(format!("grid must have at least 3 points, got {}", self.grid)));
        }
        self.intset()?;
        self.method()?;
        Ok(())
    }

    pub fn eval_options(&self) -> Result<EvalOptions, CliError> {
        Ok(EvalOptions { method: self.method()?, min_condition: self.min_condition, tol_quad: self.tol_quad })
    }

    pub fn solver_options(&self) -> Result<SolverOptions, CliError> {
        Ok(SolverOptions {
            eval: self.eval_options()?,
            tol_g: self.tol_g,
            tol_residual: self.tol_residual,
            ..SolverOptions::default()
        })
    }

    pub fn sweep_config(&self) -> Result<SweepConfig, CliError> {
        let intset = self.intset()?;
        let g0 = tetrahedral_seed(intset).ok_or_else(|| {
            CliError::Usage(format!("no seed point is known for intset {intset}; use 4,1,-3,1 or 5,1,-3,0"))
        })?;
        Ok(SweepConfig {
            intset,
            seed: (0.0, g0),
            a_min: self.a_min,
            a_max: self.a_max,
            step: self.step,
            step_fine: self.step_fine,
            fine_from: self.fine_from,
            verify: self.verify,
            solver: self.solver_options()?,
        })
    }
}
