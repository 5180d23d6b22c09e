//! The reduced Ercolani–Sinha constraints `∮_𝔠 dX/Y = 0` and
//! `6β^{1/3} = ∮_𝔠 X dX/Y`, the root-find for `g(a)` and the continuation
//! sweep along the solution locus.
//!
//! Because `𝔠` is anti-invariant under the antiholomorphic involution, both
//! cycle integrals are real for real `(a, g)`; the constraint is therefore a
//! real function of `g` and is solved by bracketing plus Brent's method.

use crate::monopole_curve::{
    cycle_c, cycle_integrals, degeneracy, pair_values, period_data_from_pairs, quotient_branch_points, CurveError,
    CurveParams, EvalOptions, IntSet, PairValues, PeriodMethod,
};
use crate::C64;
use nalgebra::Matrix2;
use roots::{find_root_brent, Convergency};
use thiserror::Error;

/// A failed solve whose predicted point lies this close (in relative
/// discriminant) to a singular curve is reported as a degeneracy stop.
pub const NEAR_DEGENERATE: f64 = 0.05;

/// Largest tolerated imaginary part of a cycle integral, relative to the
/// pair-integral scale.
pub const REALNESS_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("no sign change of the residual found around g = {g_init} at a = {a}")]
    NoBracket { a: f64, g_init: f64 },
    #[error("root refinement failed at a = {a}: {detail}")]
    NoConvergence { a: f64, detail: String },
    #[error("{what} has imaginary part {im:.3e} (relative), expected a real value")]
    NonReal { what: &'static str, im: f64 },
    #[error("β = 0 cannot be unscaled")]
    ZeroBeta,
    #[error("solution at a = {a} fails oracle re-verification (relative residual {residual:.3e})")]
    Verification { a: f64, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub eval: EvalOptions,
    /// Absolute tolerance on `g`.
    pub tol_g: f64,
    /// Relative (to the pair-integral scale) tolerance on the residual.
    pub tol_residual: f64,
    /// Initial half-width of the bracket search around the start value.
    pub bracket_step: f64,
    pub max_bracket_doublings: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            eval: EvalOptions::default(),
            tol_g: 1e-10,
            tol_residual: 1e-8,
            bracket_step: 0.05,
            max_bracket_doublings: 8,
        }
    }
}

/// Both cycle integrals of `𝔠` at one curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsIntegrals {
    /// `∮_𝔠 dX/Y`.
    pub residual: C64,
    /// `∮_𝔠 X dX/Y`.
    pub x_integral: C64,
    /// Largest pair-integral modulus, the scale for relative tolerances.
    pub scale: f64,
    pub pairs: PairValues,
}

pub fn es_integrals(a: f64, g: f64, intset: IntSet, eval: &EvalOptions) -> Result<EsIntegrals, CurveError> {
    let bps = quotient_branch_points(CurveParams::new(a, g))?;
    let pairs = pair_values(&bps, eval)?;
    let (residual, x_integral) = cycle_integrals(&cycle_c(intset), &pairs);
    Ok(EsIntegrals { residual, x_integral, scale: pairs.scale(), pairs })
}

/// `∮_𝔠 dX/Y` at `(a, g)`.
pub fn es_residual(a: f64, g: f64, intset: IntSet, eval: &EvalOptions) -> Result<C64, CurveError> {
    Ok(es_integrals(a, g, intset, eval)?.residual)
}

fn real_residual(a: f64, g: f64, intset: IntSet, eval: &EvalOptions) -> Result<f64, SolveError> {
    let e = es_integrals(a, g, intset, eval)?;
    let im = e.residual.im.abs() / e.scale;
    if im > REALNESS_TOL {
        return Err(SolveError::NonReal { what: "∮ dX/Y", im });
    }
    Ok(e.residual.re)
}

struct Tolerances {
    x: f64,
    y: f64,
    max_iter: usize,
}

impl Convergency<f64> for Tolerances {
    fn is_root_found(&mut self, y: f64) -> bool {
        y == 0.0 || y.abs() < self.y
    }

    fn is_converged(&mut self, x1: f64, x2: f64) -> bool {
        (x1 - x2).abs() < self.x
    }

    fn is_iteration_limit_reached(&mut self, iter: usize) -> bool {
        iter >= self.max_iter
    }
}

/// Finds the sign change of the residual nearest to `g_init`, scanning
/// outward in steps that double up to `max_bracket_doublings` times.
fn bracket(a: f64, intset: IntSet, g_init: f64, opts: &SolverOptions) -> Result<(f64, f64), SolveError> {
    let f = |g: f64| real_residual(a, g, intset, &opts.eval);
    let f0 = f(g_init)?;
    if f0 == 0.0 {
        return Ok((g_init, g_init));
    }
    let mut h = opts.bracket_step;
    let (mut lo, mut flo) = (g_init, f0);
    let (mut hi, mut fhi) = (g_init, f0);
    for _ in 0..=opts.max_bracket_doublings {
        // Expand both sides by h, checking the nearer new intervals first.
        let (nl, nh) = (lo - h, hi + h);
        let fl = f(nl);
        let fh = f(nh);
        if let Ok(v) = fl {
            if v.signum() != flo.signum() {
                return Ok((nl, lo));
            }
        }
        if let Ok(v) = fh {
            if v.signum() != fhi.signum() {
                return Ok((hi, nh));
            }
        }
        if let Ok(v) = fl {
            lo = nl;
            flo = v;
        }
        if let Ok(v) = fh {
            hi = nh;
            fhi = v;
        }
        if let (Err(e), Err(_)) = (fl, fh) {
            return Err(e);
        }
        h *= 2.0;
    }
    Err(SolveError::NoBracket { a, g_init })
}

/// Solves `∮_𝔠 dX/Y = 0` for `g` at fixed `a`, starting the bracket search
/// at `g_init`.
pub fn solve_g(a: f64, intset: IntSet, g_init: f64, opts: &SolverOptions) -> Result<f64, SolveError> {
    let (lo, hi) = bracket(a, intset, g_init, opts)?;
    if lo == hi {
        return Ok(lo);
    }
    let scale = es_integrals(a, 0.5 * (lo + hi), intset, &opts.eval)?.scale;
    let mut conv = Tolerances { x: opts.tol_g, y: 1e-3 * opts.tol_residual * scale, max_iter: 200 };
    let f = |g: f64| real_residual(a, g, intset, &opts.eval).unwrap_or(f64::NAN);
    find_root_brent(lo, hi, f, &mut conv).map_err(|e| SolveError::NoConvergence { a, detail: format!("{e:?}") })
}

/// `β = (∮_𝔠 X dX/Y / 6)³` from integrals at a solution.
pub fn beta_from_integrals(e: &EsIntegrals) -> Result<f64, SolveError> {
    let im = e.x_integral.im.abs() / e.scale;
    if im > REALNESS_TOL {
        return Err(SolveError::NonReal { what: "∮ X dX/Y", im });
    }
    Ok((e.x_integral.re / 6.0).powi(3))
}

pub fn beta_from(a: f64, g: f64, intset: IntSet, eval: &EvalOptions) -> Result<f64, SolveError> {
    beta_from_integrals(&es_integrals(a, g, intset, eval)?)
}

/// `(α, γ) = (a·|β|^{2/3}, g·β)`.
pub fn unscale(a: f64, g: f64, beta: f64) -> Result<(f64, f64), SolveError> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(SolveError::ZeroBeta);
    }
    Ok((a * beta.abs().powf(2.0 / 3.0), g * beta))
}

/// The `g` of the seed point `a = 0` for the two standard integer sets
/// (`±5√2`); other sets have no default seed.
pub fn tetrahedral_seed(intset: IntSet) -> Option<f64> {
    let g = 5.0 * std::f64::consts::SQRT_2;
    if intset == IntSet::PLUS {
        Some(g)
    } else if intset == IntSet::MINUS {
        Some(-g)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPoint {
    pub a: f64,
    pub g: f64,
    pub beta: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// `∮_𝔠 dX/Y` at the solution, by the evaluator used for the solve.
    pub residual: C64,
    /// Residual by direct quadrature, relative to the pair-integral scale.
    pub oracle_residual_rel: Option<f64>,
    pub tau: Matrix2<C64>,
    pub intset: IntSet,
    pub method: PeriodMethod,
}

impl SolutionPoint {
    pub fn residual_abs(&self) -> f64 {
        self.residual.norm()
    }
}

/// Solves at `a` from `g_init` and assembles the full point. With `verify`
/// the residual is recomputed by quadrature and must stay below
/// `tol_residual` relative to the pair scale.
pub fn solve_point(
    a: f64,
    intset: IntSet,
    g_init: f64,
    opts: &SolverOptions,
    verify: bool,
) -> Result<SolutionPoint, SolveError> {
    let g = solve_g(a, intset, g_init, opts)?;
    let e = es_integrals(a, g, intset, &opts.eval)?;
    let beta = beta_from_integrals(&e)?;
    let (alpha, gamma) = unscale(a, g, beta)?;
    let pd = period_data_from_pairs(CurveParams::new(a, g), e.pairs)?;
    let oracle_residual_rel = if verify {
        let oracle = EvalOptions { method: PeriodMethod::Oracle, ..opts.eval };
        let o = es_integrals(a, g, intset, &oracle)?;
        let rel = o.residual.norm() / o.scale;
        if !(rel < opts.tol_residual) {
            return Err(SolveError::Verification { a, residual: rel });
        }
        Some(rel)
    } else {
        None
    };
    Ok(SolutionPoint {
        a,
        g,
        beta,
        alpha,
        gamma,
        residual: e.residual,
        oracle_residual_rel,
        tau: pd.tau,
        intset,
        method: e.pairs.method,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub intset: IntSet,
    pub seed: (f64, f64),
    pub a_min: f64,
    pub a_max: f64,
    pub step: f64,
    pub step_fine: f64,
    /// Above this `a` the fine step is used.
    pub fine_from: f64,
    pub verify: bool,
    pub solver: SolverOptions,
}

impl SweepConfig {
    /// Sweep over `[a_min, a_max]` from the tetrahedral seed of `intset`.
    pub fn new(intset: IntSet, a_min: f64, a_max: f64) -> Option<Self> {
        Some(Self {
            intset,
            seed: (0.0, tetrahedral_seed(intset)?),
            a_min,
            a_max,
            step: 0.1,
            step_fine: 0.01,
            fine_from: 2.8,
            verify: true,
            solver: SolverOptions::default(),
        })
    }
}

/// Why a sweep direction ended.
#[derive(Debug, Clone, PartialEq)]
pub enum StopReason {
    /// The requested end of the range was reached.
    Completed,
    /// The next grid point was at or past a degenerate curve.
    Degenerate { a: f64, detail: String },
    /// The solver failed at the next grid point.
    Stalled { a: f64, detail: String },
    /// The step in `g` exceeded ten times the local slope estimate.
    Jump { a: f64, g: f64, expected: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Seed first (when inside the range), then increasing `a`, then
    /// decreasing `a`.
    pub points: Vec<SolutionPoint>,
    pub upper: StopReason,
    pub lower: StopReason,
}

impl SweepResult {
    pub fn points_sorted(&self) -> Vec<&SolutionPoint> {
        let mut v: Vec<_> = self.points.iter().collect();
        v.sort_by(|x, y| x.a.total_cmp(&y.a));
        v
    }
}

fn tidy(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

/// Grid from `start` (exclusive) towards `end` (inclusive): coarse steps,
/// switching to the fine step beyond `fine_from` when moving upwards.
pub fn sweep_grid(start: f64, end: f64, step: f64, step_fine: f64, fine_from: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let eps = 1e-9;
    if end > start {
        let mut k = 1;
        loop {
            let a = tidy(start + k as f64 * step);
            if a > fine_from + eps || a > end + eps {
                break;
            }
            out.push(a);
            k += 1;
        }
        let base = out.last().copied().unwrap_or(start).max(start);
        let base = if base < fine_from - eps && fine_from <= end + eps && fine_from > start + eps {
            out.push(fine_from);
            fine_from
        } else {
            base
        };
        let mut k = 1;
        loop {
            let a = tidy(base + k as f64 * step_fine);
            if a > end + eps {
                break;
            }
            out.push(a);
            k += 1;
        }
    } else {
        let mut k = 1;
        loop {
            let a = tidy(start - k as f64 * step);
            if a < end - eps {
                break;
            }
            out.push(a);
            k += 1;
        }
    }
    out
}

fn classify(a: f64, guess: f64, e: SolveError) -> StopReason {
    match e {
        SolveError::Curve(CurveError::Degenerate { detail, .. }) => StopReason::Degenerate { a, detail },
        other => {
            let rel = degeneracy(CurveParams::new(a, guess));
            if rel < NEAR_DEGENERATE {
                StopReason::Degenerate {
                    a,
                    detail: format!(
                        "solution locus runs into the singular curve (3, 0) (relative discriminant {rel:.2e}): {other}"
                    ),
                }
            } else {
                StopReason::Stalled { a, detail: other.to_string() }
            }
        }
    }
}

fn march(cfg: &SweepConfig, seed: &SolutionPoint, grid: &[f64], out: &mut Vec<SolutionPoint>) -> StopReason {
    let mut prev: Vec<(f64, f64)> = vec![(seed.a, seed.g)];
    for &a in grid {
        let n = prev.len();
        let guess = if n >= 2 {
            let ((a1, g1), (a2, g2)) = (prev[n - 2], prev[n - 1]);
            g2 + (g2 - g1) / (a2 - a1) * (a - a2)
        } else {
            prev[n - 1].1
        };
        // The locus is asymptotic to the singular curve (3, 0); reaching it
        // ends the sweep.
        if let Err(e @ CurveError::Degenerate { .. }) = quotient_branch_points(CurveParams::new(a, guess)) {
            return classify(a, guess, e.into());
        }
        let mut solver = cfg.solver;
        if n >= 2 {
            let (a1, g1) = prev[n - 2];
            let (a2, g2) = prev[n - 1];
            let local = ((g2 - g1) / (a2 - a1) * (a - a2)).abs();
            solver.bracket_step = solver.bracket_step.min(local.max(1e-6));
        }
        let p = match solve_point(a, cfg.intset, guess, &solver, cfg.verify) {
            Ok(p) => p,
            Err(e) => return classify(a, guess, e),
        };
        if n >= 2 {
            let (a1, g1) = prev[n - 2];
            let (a2, g2) = prev[n - 1];
            let slope = (g2 - g1) / (a2 - a1);
            let expected = (slope * (a - a2)).abs().max(1e-6);
            if (p.g - g2).abs() > 10.0 * expected {
                return StopReason::Jump { a, g: p.g, expected };
            }
        }
        prev.push((a, p.g));
        out.push(p);
    }
    StopReason::Completed
}

/// Continuation over `[a_min, a_max]` starting at the seed, warm-starting
/// each solve from a linear extrapolation of the last two points. Only
/// points inside the range are returned.
pub fn continuation_sweep(cfg: &SweepConfig) -> Result<SweepResult, SolveError> {
    let (a0, g0) = cfg.seed;
    let seed = solve_point(a0, cfg.intset, g0, &cfg.solver, cfg.verify)?;
    // The two directions are independent; each runs on its own thread and
    // the results are merged in a fixed order, so output is deterministic.
    let direction = |end: f64, active: bool| {
        let mut pts = Vec::new();
        let stop = if active {
            let grid = sweep_grid(a0, end, cfg.step, cfg.step_fine, cfg.fine_from);
            march(cfg, &seed, &grid, &mut pts)
        } else {
            StopReason::Completed
        };
        (pts, stop)
    };
    let ((up, upper), (down, lower)) = std::thread::scope(|s| {
        let up = s.spawn(|| direction(cfg.a_max, cfg.a_max > a0));
        let down = direction(cfg.a_min, cfg.a_min < a0);
        (up.join().expect("upward sweep thread panicked"), down)
    });
    let mut points = vec![seed.clone()];
    points.extend(up);
    points.extend(down);
    // The march starts at the seed even when it lies outside the range.
    points.retain(|p| p.a >= cfg.a_min - 1e-9 && p.a <= cfg.a_max + 1e-9);
    Ok(SweepResult { points, upper, lower })
}

/// Continues the locus from `start` towards `a_end` with steps growing
/// geometrically (`a ↦ ratio·a`, `ratio > 1`), for reaching far into the
/// negative-`a` tail where the solution varies on a logarithmic scale.
/// `before` is an earlier point of the locus used for the first
/// extrapolation.
pub fn tail_sweep(
    before: (f64, f64),
    start: &SolutionPoint,
    a_end: f64,
    ratio: f64,
    opts: &SolverOptions,
    verify: bool,
) -> (Vec<SolutionPoint>, StopReason) {
    let mut out = Vec::new();
    let mut prev = before;
    let (mut a, mut g) = (start.a, start.g);
    loop {
        let na = a * ratio;
        if (a_end < 0.0 && na < a_end) || (a_end >= 0.0 && na > a_end) {
            return (out, StopReason::Completed);
        }
        let slope = (g - prev.1) / (a - prev.0);
        let guess = g + slope * (na - a);
        let mut solver = *opts;
        solver.bracket_step = ((guess - g).abs() * 0.05).max(opts.bracket_step);
        solver.max_bracket_doublings = solver.max_bracket_doublings.max(16);
        let p = match solve_point(na, start.intset, guess, &solver, verify) {
            Ok(p) => p,
            Err(e) => return (out, classify(na, guess, e)),
        };
        let expected = (slope * (na - a)).abs().max(1e-6);
        if (p.g - g).abs() > 10.0 * expected {
            return (out, StopReason::Jump { a: na, g: p.g, expected });
        }
        prev = (a, g);
        a = na;
        g = p.g;
        out.push(p);
    }
}

/// Solution at `a`, reached by continuation from the seed of `cfg` (its
/// range is replaced by `[seed, a]`), with a final solve when `a` is not on
/// the sweep grid.
pub fn solve_by_continuation(a: f64, cfg: &SweepConfig) -> Result<SolutionPoint, SolveError> {
    let mut c = cfg.clone();
    if a >= c.seed.0 {
        c.a_max = a;
        c.a_min = c.seed.0;
    } else {
        c.a_min = a;
        c.a_max = c.seed.0;
    }
    let run = continuation_sweep(&c)?;
    let stop = if a >= c.seed.0 { &run.upper } else { &run.lower };
    if let StopReason::Degenerate { detail, .. } | StopReason::Stalled { detail, .. } = stop {
        return Err(SolveError::NoConvergence { a, detail: detail.clone() });
    }
    if let StopReason::Jump { a: at, .. } = stop {
        return Err(SolveError::NoConvergence { a, detail: format!("branch jump at a = {at}") });
    }
    let mut path: Vec<&SolutionPoint> =
        run.points.iter().filter(|p| (p.a - c.seed.0) * (a - c.seed.0) >= 0.0).collect();
    path.sort_by(|x, y| (x.a - c.seed.0).abs().total_cmp(&(y.a - c.seed.0).abs()));
    let last = *path.last().expect("the seed is always present");
    if (last.a - a).abs() < 1e-12 {
        return Ok(last.clone());
    }
    let guess = if path.len() >= 2 {
        let prev = path[path.len() - 2];
        last.g + (last.g - prev.g) / (last.a - prev.a) * (a - last.a)
    } else {
        last.g
    };
    solve_point(a, c.intset, guess, &c.solver, c.verify)
}
