//! Genus-2 Riemann theta functions with rational characteristics, the
//! Ercolani–Sinha vector, and the scan of the three Fay–Accola factors
//! `θ[0 0; k/3 0](λU − K_{∞₊} + e; τ)` along the linear flow `λ ∈ [0, 2]`.

use crate::monopole_curve::{
    abel_characteristics, im_part, pair_values, period_data_from_pairs, quotient_branch_points, CurveError,
    CurveParams, EvalOptions, IntSet, PeriodData, CHARACTERISTIC_TOL,
};
use crate::C64;
use nalgebra::{Matrix2, Vector2};
use num_rational::Rational64;
use num_traits::ToPrimitive;
use std::f64::consts::PI;
use thiserror::Error;

/// Default bound on the discarded tail of the theta series, relative to its
/// largest term.
pub const DEFAULT_THETA_TOL: f64 = 1e-12;

/// A factor counts as vanishing at an endpoint when its modulus is below this
/// fraction of its median modulus over the interior of the flow.
pub const VANISHING_THRESHOLD: f64 = 1e-6;

/// Interior of the flow used for the nonvanishing check.
pub const INTERIOR: (f64, f64) = (0.02, 1.98);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error("Im τ is not positive definite (smallest eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("the flow grid needs at least 3 points, got {0}")]
    Grid(usize),
}

/// `[α₁ α₂; β₁ β₂]`, standing for the shift `β + τα`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaChar {
    pub alpha: [Rational64; 2],
    pub beta: [Rational64; 2],
}

impl ThetaChar {
    pub fn zero() -> Self {
        let z = Rational64::from_integer(0);
        Self { alpha: [z, z], beta: [z, z] }
    }

    /// Characteristic with entries `num/den`, given as `((n, d), …)`.
    pub fn new(alpha: [(i64, i64); 2], beta: [(i64, i64); 2]) -> Self {
        let r = |(n, d): (i64, i64)| Rational64::new(n, d);
        Self { alpha: alpha.map(r), beta: beta.map(r) }
    }

    /// The Fay–Accola factor characteristic `[0 0; k/3 0]`.
    pub fn fay_accola(k: i64) -> Self {
        Self::new([(0, 1), (0, 1)], [(k, 3), (0, 1)])
    }

    pub fn alpha_f64(&self) -> [f64; 2] {
        self.alpha.map(|x| x.to_f64().unwrap_or(f64::NAN))
    }

    pub fn beta_f64(&self) -> [f64; 2] {
        self.beta.map(|x| x.to_f64().unwrap_or(f64::NAN))
    }

    /// Parity `4α·β mod 2` of a half-integer characteristic; `None` otherwise.
    pub fn half_parity(&self) -> Option<i64> {
        let two = Rational64::from_integer(2);
        let all_half = self.alpha.iter().chain(self.beta.iter()).all(|x| (*x * two).is_integer());
        if !all_half {
            return None;
        }
        let s = (self.alpha[0] * self.beta[0] + self.alpha[1] * self.beta[1]) * Rational64::from_integer(4);
        Some(s.to_integer().rem_euclid(2))
    }
}

fn sym_im(tau: &Matrix2<C64>) -> Matrix2<f64> {
    let y = im_part(tau);
    (y + y.transpose()) * 0.5
}

fn min_eigenvalue(y: &Matrix2<f64>) -> f64 {
    let (p, q, r) = (y[(0, 0)], y[(0, 1)], y[(1, 1)]);
    0.5 * (p + r) - (0.25 * (p - r).powi(2) + q * q).sqrt()
}

/// Radius of the lattice ball whose complement contributes less than `tol`
/// relative to the largest term: the tail is bounded by
/// `Σ_{r>R} 2πr·exp(−πλr²) ≈ exp(−πλR²)/λ`, plus one for the lattice offset.
pub fn truncation_radius(tau: &Matrix2<C64>, tol: f64) -> Result<f64, ThetaError> {
    let lam = min_eigenvalue(&sym_im(tau));
    if !(lam > 0.0) {
        return Err(ThetaError::NotPositiveDefinite(lam));
    }
    let r2 = (-(tol * lam).ln()).max(0.0) / (PI * lam);
    Ok(r2.sqrt() + 1.0)
}

/// The theta series summed over `|n + α − c| ≤ radius`, with `c` the centre
/// of the Gaussian envelope.
pub fn theta2_with_radius(
    z: &Vector2<C64>,
    tau: &Matrix2<C64>,
    ch: &ThetaChar,
    radius: f64,
) -> Result<C64, ThetaError> {
    let y = sym_im(tau);
    let lam = min_eigenvalue(&y);
    if !(lam > 0.0) {
        return Err(ThetaError::NotPositiveDefinite(lam));
    }
    let y_inv = y.try_inverse().ok_or(ThetaError::NotPositiveDefinite(lam))?;
    let [a0, a1] = ch.alpha_f64();
    let [b0, b1] = ch.beta_f64();
    let zb = Vector2::new(z[0] + b0, z[1] + b1);
    let centre = -(y_inv * Vector2::new(z[0].im, z[1].im));
    // Re of the exponent at the centre; factored out so partial sums stay O(1).
    let peak = PI * (centre.transpose() * y * centre)[(0, 0)];
    let i_pi = C64::new(0.0, PI);
    let lo0 = (centre[0] - a0 - radius).floor() as i64;
    let hi0 = (centre[0] - a0 + radius).ceil() as i64;
    let lo1 = (centre[1] - a1 - radius).floor() as i64;
    let hi1 = (centre[1] - a1 + radius).ceil() as i64;
    let mut sum = C64::from(0.0);
    for n0 in lo0..=hi0 {
        for n1 in lo1..=hi1 {
            let v = (n0 as f64 + a0, n1 as f64 + a1);
            if (v.0 - centre[0]).powi(2) + (v.1 - centre[1]).powi(2) > radius * radius {
                continue;
            }
            let quad = tau[(0, 0)] * v.0 * v.0 + (tau[(0, 1)] + tau[(1, 0)]) * v.0 * v.1 + tau[(1, 1)] * v.1 * v.1;
            let lin = zb[0] * v.0 + zb[1] * v.1;
            sum += (i_pi * (quad + lin * 2.0) - peak).exp();
        }
    }
    Ok(sum * peak.exp())
}

/// `θ[α;β](z; τ) = Σₙ exp(πi(n+α)ᵀτ(n+α) + 2πi(n+α)ᵀ(z+β))`, truncated so
/// the discarded tail is below `tol` relative to the largest term.
pub fn theta2(z: &Vector2<C64>, tau: &Matrix2<C64>, ch: &ThetaChar, tol: f64) -> Result<C64, ThetaError> {
    theta2_with_radius(z, tau, ch, truncation_radius(tau, tol)?)
}

/// `U = ½(n₀/3, n) + ½(m₀, m)τ`.
pub fn es_vector(s: IntSet, tau: &Matrix2<C64>) -> Vector2<C64> {
    let re = Vector2::new(C64::from(s.n0 as f64 / 3.0), C64::from(s.n as f64));
    let m = Vector2::new(C64::from(s.m0 as f64), C64::from(s.m as f64));
    (re + tau.transpose() * m) * C64::from(0.5)
}

/// `e = (1/3, 0)`.
pub fn fay_accola_shift() -> Vector2<C64> {
    Vector2::new(C64::from(1.0 / 3.0), C64::from(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowPoint {
    pub lambda: f64,
    pub z: Vector2<C64>,
    /// `θ[0 0; k/3 0](z; τ)` for `k = 0, 1, 2`.
    pub values: [C64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct H3Scan {
    pub points: Vec<FlowPoint>,
    pub interior_min: [f64; 3],
    pub interior_median: [f64; 3],
    /// Moduli at `λ = 0` and `λ = 2`.
    pub endpoint_moduli: [[f64; 3]; 2],
}

impl H3Scan {
    /// Which factors vanish at `λ = 0` (`end = 0`) or `λ = 2` (`end = 1`).
    pub fn vanishing(&self, end: usize) -> [bool; 3] {
        std::array::from_fn(|k| self.endpoint_moduli[end][k] < VANISHING_THRESHOLD * self.interior_median[k])
    }

    pub fn vanishing_count(&self, end: usize) -> usize {
        self.vanishing(end).iter().filter(|&&v| v).count()
    }

    /// Smallest endpoint modulus of factor `k` over both ends.
    pub fn endpoint_min(&self, k: usize) -> f64 {
        self.endpoint_moduli[0][k].min(self.endpoint_moduli[1][k])
    }

    /// Per factor, the interior minimum exceeds `10³` times its smallest
    /// endpoint modulus.
    pub fn margin_ok(&self) -> bool {
        (0..3).all(|k| self.interior_min[k] > 1e3 * self.endpoint_min(k))
    }

    /// Nonvanishing on the interior with the `10³` margin, and exactly two
    /// vanishing factors at each end.
    pub fn satisfies_h3(&self) -> bool {
        self.margin_ok() && self.vanishing_count(0) == 2 && self.vanishing_count(1) == 2
    }
}

/// Uniform grid of `n` points on `[0, 2]`.
pub fn flow_grid(n: usize) -> Result<Vec<f64>, ThetaError> {
    if n < 3 {
        return Err(ThetaError::Grid(n));
    }
    Ok((0..n).map(|j| 2.0 * j as f64 / (n - 1) as f64).collect())
}

/// Evaluates the three factors along `z = λU − K_{∞₊} + e` over `grid`,
/// which must start at `0` and end at `2`.
pub fn h3_scan(
    tau: &Matrix2<C64>,
    k_inf: &Vector2<C64>,
    intset: IntSet,
    grid: &[f64],
    tol: f64,
) -> Result<H3Scan, ThetaError> {
    if grid.len() < 3 {
        return Err(ThetaError::Grid(grid.len()));
    }
    let u = es_vector(intset, tau);
    let base = fay_accola_shift() - k_inf;
    let chars = [0, 1, 2].map(ThetaChar::fay_accola);
    let radius = truncation_radius(tau, tol)?;
    let mut points = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let z = u * C64::from(lambda) + base;
        let mut values = [C64::from(0.0); 3];
        for (v, ch) in values.iter_mut().zip(chars.iter()) {
            // The envelope centre moves with z, so the radius is measured from it.
            *v = theta2_with_radius(&z, tau, ch, radius)?;
        }
        points.push(FlowPoint { lambda, z, values });
    }
    let mut interior_min = [f64::INFINITY; 3];
    let mut interior_median = [0.0; 3];
    for k in 0..3 {
        let mut inner: Vec<f64> = points
            .iter()
            .filter(|p| p.lambda >= INTERIOR.0 - 1e-12 && p.lambda <= INTERIOR.1 + 1e-12)
            .map(|p| p.values[k].norm())
            .collect();
        inner.sort_by(f64::total_cmp);
        interior_min[k] = inner.first().copied().unwrap_or(f64::NAN);
        interior_median[k] = inner.get(inner.len() / 2).copied().unwrap_or(f64::NAN);
    }
    let first = points.first().expect("non-empty grid").values.map(|v| v.norm());
    let last = points.last().expect("non-empty grid").values.map(|v| v.norm());
    Ok(H3Scan { points, interior_min, interior_median, endpoint_moduli: [first, last] })
}

/// Period data, `K_{∞₊}` (from the Abel map, checked against its expected
/// characteristic) and the scan for a solved curve.
pub fn h3_scan_curve(
    params: CurveParams,
    intset: IntSet,
    eval: &EvalOptions,
    n_grid: usize,
) -> Result<(PeriodData, H3Scan), ThetaError> {
    let bps = quotient_branch_points(params)?;
    let pd = period_data_from_pairs(params, pair_values(&bps, eval)?)?;
    let abel = abel_characteristics(&pd, &bps, eval.tol_quad)?;
    abel.verify(CHARACTERISTIC_TOL)?;
    let k_inf = abel.k_inf.to_vector(&pd.tau);
    let scan = h3_scan(&pd.tau, &k_inf, intset, &flow_grid(n_grid)?, DEFAULT_THETA_TOL)?;
    Ok((pd, scan))
}
