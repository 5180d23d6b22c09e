//! The quotient-curve family `Y² = (X³ + aX + g)² + 4` of the cyclically
//! symmetric charge-3 monopole curves, its homology basis, period matrix,
//! Abel-map characteristics and vector of Riemann constants.
//!
//! # Labelling and sheet
//!
//! The six branch points form three conjugate pairs. With `a`, `b`, `c` the
//! members of the pairs in the lower half-plane, ordered by real part,
//!
//! ```text
//!     B₁ = c,  B₂ = b,  B₃ = a,  B₄ = ā,  B₅ = b̄,  B₆ = c̄,
//! ```
//!
//! so `B₆ = B̄₁`, `B₅ = B̄₂`, `B₄ = B̄₃`. The Richelot pairs are
//! `(a, a′) = (B₃, B₄)`, `(b, b′) = (B₂, B₅)`, `(c, c′) = (B₁, B₆)`.
//!
//! Sheet 1 is the branch `w` of `Y` with cuts `(c′, b′)`, `(a′, a)`, `(b, c)`
//! that is positive on the real axis to the right of every branch point
//! (there `w ~ +X³`). All cycle integrals are combinations of
//! `J(p, q) = ∫_p^q S dX / w` along straight segments; segments running
//! along a cut use the lip facing the other branch points.

use crate::hyperpoly::{HyperpolyError, DEGENERACY_THRESHOLD};
use crate::quadrature::{infinity_integral, segment, Endpoint, Lip, QuadError, DEFAULT_TOL};
use crate::richelot::{integrals_conjugate, PairLabel, RichelotError, DEFAULT_MIN_CONDITION};
use crate::{CutSheet, Linear, SexticModel, C64};
use nalgebra::{DMatrix, Matrix2, Vector2};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("degenerate curve at (a, g) = ({a}, {g}): {detail}")]
    Degenerate { a: f64, g: f64, detail: String },
    #[error(transparent)]
    Hyperpoly(#[from] HyperpolyError),
    #[error(transparent)]
    Richelot(#[from] RichelotError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("branch-point solver failed: {0}")]
    RootSolver(String),
    #[error("a-period matrix is singular to working precision (relative |det| = {0:.3e})")]
    IllConditioned(f64),
    #[error("period matrix fails a Riemann relation: {0}")]
    PeriodCheck(String),
    #[error("{what} does not reduce to the expected characteristic (distance {distance:.3e})")]
    ConventionMismatch { what: String, distance: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Scaled parameters `(a, g)` of `Y² = (X³ + aX + g)² + 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveParams {
    pub a: f64,
    pub g: f64,
}

impl CurveParams {
    pub fn new(a: f64, g: f64) -> Self {
        Self { a, g }
    }

    /// `a = α / |β|^{2/3}`, `g = γ / β`.
    pub fn from_unscaled(alpha: f64, beta: f64, gamma: f64) -> Result<Self, CurveError> {
        if beta == 0.0 || !beta.is_finite() {
            return Err(CurveError::InvalidParams(format!("β = {beta} cannot be scaled out")));
        }
        Ok(Self { a: alpha / beta.abs().powf(2.0 / 3.0), g: gamma / beta })
    }

    /// Coefficients of `(X³ + aX + g)² + 4`, constant term first.
    pub fn sextic_coeffs(&self) -> [f64; 7] {
        let (a, g) = (self.a, self.g);
        [g * g + 4.0, 2.0 * a * g, a * a, 2.0 * g, 2.0 * a, 0.0, 1.0]
    }
}

/// Branch points in the order `(a, a′, b, b′, c, c′)` as `Bₖ` indices.
pub const MODEL_LABELS: [usize; 6] = [3, 4, 2, 5, 1, 6];

/// Cuts of the sheet-1 branch, as index pairs into the model order.
pub const SHEET_CUTS: [(usize, usize); 3] = [(5, 3), (1, 0), (2, 4)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPointSet {
    pub params: CurveParams,
    points: [C64; 6],
}

impl BranchPointSet {
    /// `Bₖ` for `k = 1..=6`.
    pub fn b(&self, k: usize) -> C64 {
        self.points[k - 1]
    }

    pub fn points(&self) -> [C64; 6] {
        self.points
    }

    /// `(a, a′, b, b′, c, c′)`.
    pub fn model_roots(&self) -> [C64; 6] {
        MODEL_LABELS.map(|k| self.b(k))
    }

    pub fn sextic(&self) -> Result<SexticModel, HyperpolyError> {
        SexticModel::conjugate(self.b(3), self.b(2), self.b(1))
    }

    /// The sheet-1 branch with its cut system.
    pub fn sheet(&self) -> CutSheet {
        CutSheet::new(self.model_roots(), SHEET_CUTS).expect("static cut system pairs all roots")
    }

    fn from_lower(params: CurveParams, mut lower: Vec<C64>) -> Result<Self, CurveError> {
        if lower.len() != 3 {
            return Err(CurveError::RootSolver(format!("{} roots in the lower half-plane, expected 3", lower.len())));
        }
        lower.sort_by(|x, y| x.re.total_cmp(&y.re));
        let (a, b, c) = (lower[0], lower[1], lower[2]);
        let set = Self { params, points: [c, b, a, a.conj(), b.conj(), c.conj()] };
        set.sextic()?;
        Ok(set)
    }
}

/// Relative discriminant of the cubic factors; zero exactly when two branch
/// points collide, which for real `(a, g)` happens only at `(3, 0)`.
pub fn degeneracy(p: CurveParams) -> f64 {
    // Discriminant of X³ + aX + q with q = g ∓ 2i, relative to its scale;
    // it vanishes exactly when two branch points collide.
    let q = C64::new(p.g, -2.0);
    let disc = -(q * q * 27.0) - 4.0 * p.a.powi(3);
    let norm = 27.0 * q.norm_sqr() + 4.0 * p.a.abs().powi(3);
    (disc.norm() / norm).sqrt()
}

/// The closest pair among the roots of `X³ + aX + g − 2i`, as text; the
/// conjugate cubic collides in the mirrored pair.
fn closest_pair(p: CurveParams) -> String {
    let r = cardano_roots(p.a, C64::new(p.g, -2.0));
    let mut best = (f64::INFINITY, 0, 1);
    for i in 0..3 {
        for j in i + 1..3 {
            let d = (r[i] - r[j]).norm();
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    let (x, y) = (r[best.1], r[best.2]);
    format!("X = {:.6}{:+.6}i and X = {:.6}{:+.6}i (and their conjugates)", x.re, x.im, y.re, y.im)
}

/// The six branch points, from the eigenvalues of the companion matrix of
/// the sextic polished by Newton steps on the cubic factor they belong to.
pub fn quotient_branch_points(p: CurveParams) -> Result<BranchPointSet, CurveError> {
    if !(p.a.is_finite() && p.g.is_finite()) {
        return Err(CurveError::InvalidParams(format!("non-finite (a, g) = ({}, {})", p.a, p.g)));
    }
    let rel = degeneracy(p);
    if rel < DEGENERACY_THRESHOLD {
        return Err(CurveError::Degenerate {
            a: p.a,
            g: p.g,
            detail: format!("branch points collide pairwise (relative discriminant {rel:.2e}): {}", closest_pair(p)),
        });
    }
    let c = p.sextic_coeffs();
    let companion = DMatrix::from_fn(6, 6, |i, j| {
        if j == 5 {
            -c[i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let lower = companion.complex_eigenvalues().iter().map(|&z| polish(p, z)).filter(|z| z.im < 0.0).collect();
    BranchPointSet::from_lower(p, lower)
}

fn polish(p: CurveParams, mut z: C64) -> C64 {
    let target = if (z * z * z + p.a * z + p.g).im > 0.0 { 2.0 * I } else { -2.0 * I };
    for _ in 0..3 {
        let f = z * z * z + p.a * z + p.g - target;
        let df = 3.0 * z * z + p.a;
        if df.norm() == 0.0 {
            break;
        }
        z -= f / df;
    }
    z
}

/// Roots of `X³ + aX + q` by Cardano's formula,
/// `X = δ^{1/3}/6 − 2a/δ^{1/3}` with `δ = −108q + 12√(81q² + 12a³)`,
/// taking the three cube roots of `δ`.
pub fn cardano_roots(a: f64, q: C64) -> [C64; 3] {
    let root = (81.0 * q * q + 12.0 * a.powi(3)).sqrt();
    let (d1, d2) = (-108.0 * q + 12.0 * root, -108.0 * q - 12.0 * root);
    let delta = if d1.norm() >= d2.norm() { d1 } else { d2 };
    let rho = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let cube = delta.powf(1.0 / 3.0);
    [0, 1, 2].map(|k| {
        let u = cube * rho.powi(k);
        if u.norm() == 0.0 {
            C64::from(0.0)
        } else {
            u / 6.0 - 2.0 * a / u
        }
    })
}

/// Closed-form cross-check of [`quotient_branch_points`], labelled by the
/// same rule.
pub fn closed_form_branch_points(p: CurveParams) -> Result<BranchPointSet, CurveError> {
    let mut all = cardano_roots(p.a, C64::new(p.g, -2.0)).to_vec();
    all.extend(cardano_roots(p.a, C64::new(p.g, 2.0)));
    BranchPointSet::from_lower(p, all.into_iter().filter(|z| z.im < 0.0).collect())
}

/// The twelve ramification points (in `ζ`) of the genus-4 curve
/// `η³ + αηζ² + βζ⁶ + γζ³ − β = 0`, indexed `j + 4k` for the orbit
/// `ρᵏ·(t_j)^{1/3}`, `j = 0..4`, `k = 0..3`.
///
/// `t = ζ³` solves `βt² + (γ ± c)t − β = 0` with `c = 2iα^{3/2}/(3√3)`:
/// the `η`-discriminant `−4α³ζ⁶ − 27(βζ⁶ + γζ³ − β)²` vanishes there.
pub fn genus4_branch_points(alpha: f64, beta: f64, gamma: f64) -> Result<[C64; 12], CurveError> {
    if beta == 0.0 || !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
        return Err(CurveError::InvalidParams(format!("(α, β, γ) = ({alpha}, {beta}, {gamma})")));
    }
    let al = C64::from(alpha);
    let c = 2.0 * I * al * al.sqrt() / (3.0 * 3f64.sqrt());
    let mut ts = Vec::with_capacity(4);
    for sgn in [1.0, -1.0] {
        let lin = gamma + sgn * c;
        let disc = (lin * lin + 4.0 * beta * beta).sqrt();
        ts.push((-lin + disc) / (2.0 * beta));
        ts.push((-lin - disc) / (2.0 * beta));
    }
    let rho = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut out = [C64::from(0.0); 12];
    for (j, t) in ts.iter().enumerate() {
        let u = t.powf(1.0 / 3.0);
        for k in 0..3 {
            out[j + 4 * k] = u * rho.powi(k as i32);
        }
    }
    Ok(out)
}

/// The integer set `(n₀, n, m₀, m)` of the distinguished cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntSet {
    pub n0: i64,
    pub n: i64,
    pub m0: i64,
    pub m: i64,
}

impl IntSet {
    /// The set passing through `(a, g) = (0, 5√2)`.
    pub const PLUS: IntSet = IntSet { n0: 4, n: 1, m0: -3, m: 1 };
    /// The set passing through `(a, g) = (0, −5√2)`.
    pub const MINUS: IntSet = IntSet { n0: 5, n: 1, m0: -3, m: 0 };

    pub fn new(n0: i64, n: i64, m0: i64, m: i64) -> Self {
        Self { n0, n, m0, m }
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::new(k * self.n0, k * self.n, k * self.m0, k * self.m)
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.n0, self.n, self.m0, self.m)
    }
}

impl FromStr for IntSet {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
        match parts.as_deref() {
            Ok(&[n0, n, m0, m]) => Ok(Self::new(n0, n, m0, m)),
            _ => Err(CurveError::InvalidParams(format!("expected four comma-separated integers, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisCycle {
    A0,
    A1,
    B0,
    B1,
}

impl BasisCycle {
    pub const ALL: [BasisCycle; 4] = [BasisCycle::A0, BasisCycle::A1, BasisCycle::B0, BasisCycle::B1];
}

/// Integer combination of `(𝔞₀, 𝔞₁, 𝔟₀, 𝔟₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct CycleExpr {
    pub a0: i64,
    pub a1: i64,
    pub b0: i64,
    pub b1: i64,
}

impl CycleExpr {
    pub fn basis(c: BasisCycle) -> Self {
        let mut e = Self::default();
        match c {
            BasisCycle::A0 => e.a0 = 1,
            BasisCycle::A1 => e.a1 = 1,
            BasisCycle::B0 => e.b0 = 1,
            BasisCycle::B1 => e.b1 = 1,
        }
        e
    }

    /// Coefficients in the order `(𝔞₀, 𝔞₁, 𝔟₀, 𝔟₁)`.
    pub fn as_array(&self) -> [i64; 4] {
        [self.a0, self.a1, self.b0, self.b1]
    }

    pub fn is_zero(&self) -> bool {
        self.as_array() == [0; 4]
    }

    /// Image under the antiholomorphic involution (row vector times `M_τ′`).
    pub fn involuted(&self) -> Self {
        let v = self.as_array();
        let mut out = [0i64; 4];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|i| v[i] * INVOLUTION_MATRIX[i][j]).sum();
        }
        Self { a0: out[0], a1: out[1], b0: out[2], b1: out[3] }
    }
}

/// `𝔠 = n₀𝔞₀ + 3n𝔞₁ + 3m₀𝔟₀ + 3m𝔟₁`.
pub fn cycle_c(s: IntSet) -> CycleExpr {
    CycleExpr { a0: s.n0, a1: 3 * s.n, b0: 3 * s.m0, b1: 3 * s.m }
}

/// Signed multiplicities of the seven `J`-integrals, in [`PairLabel::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairExpansion {
    pub coeffs: [i64; 7],
}

impl PairExpansion {
    pub fn terms(&self) -> Vec<(PairLabel, i64)> {
        PairLabel::ALL.iter().zip(self.coeffs).filter(|(_, c)| *c != 0).map(|(&l, c)| (l, c)).collect()
    }

    pub fn evaluate(&self, values: &[C64; 7]) -> C64 {
        self.coeffs.iter().zip(values).map(|(&c, &v)| v * c as f64).sum()
    }
}

/// Arc expansion of a basis cycle. Each cycle is twice a sheet-1 arc chain
/// (the sheet-2 half contributes the same amount), and the chains reduce
/// to `J(a,a′)`, `J(a,b)`, `J(a′,b′)`, `J(b,c)`:
///
/// ```text
///     𝔞₀ = 2(2J(a,a′) + J(a,b) − 2J(a′,b′) − J(b,c))
///     𝔞₁ = 2(J(b,c) − J(a,b) + J(a′,b′))
///     𝔟₀ = 2(J(a,a′) − J(a′,b′))
///     𝔟₁ = 2(J(a,a′) − J(a′,b′) − J(b,c))
/// ```
pub fn basis_cycle_expansion(c: BasisCycle) -> PairExpansion {
    // Order: AA, BB, CC, AB, ApBp, BC, BpCp.
    let coeffs = match c {
        BasisCycle::A0 => [4, 0, 0, 2, -4, -2, 0],
        BasisCycle::A1 => [0, 0, 0, -2, 2, 2, 0],
        BasisCycle::B0 => [2, 0, 0, 0, -2, 0, 0],
        BasisCycle::B1 => [2, 0, 0, 0, -2, -2, 0],
    };
    PairExpansion { coeffs }
}

pub fn cycle_to_pairs(e: &CycleExpr) -> PairExpansion {
    let mut coeffs = [0i64; 7];
    for (k, &n) in BasisCycle::ALL.iter().zip(e.as_array().iter()) {
        for (c, b) in coeffs.iter_mut().zip(basis_cycle_expansion(*k).coeffs) {
            *c += n * b;
        }
    }
    PairExpansion { coeffs }
}

/// How the seven pair integrals are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PeriodMethod {
    /// Richelot tables, falling back to quadrature where the first
    /// conjugate step is ill-conditioned or its successor degenerates.
    #[default]
    Auto,
    Agm,
    Oracle,
}

impl PeriodMethod {
    pub fn name(self) -> &'static str {
        match self {
            PeriodMethod::Auto => "auto",
            PeriodMethod::Agm => "agm",
            PeriodMethod::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub method: PeriodMethod,
    pub min_condition: f64,
    pub tol_quad: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { method: PeriodMethod::Auto, min_condition: DEFAULT_MIN_CONDITION, tol_quad: DEFAULT_TOL }
    }
}

impl EvalOptions {
    pub fn with_method(method: PeriodMethod) -> Self {
        Self { method, ..Self::default() }
    }
}

/// `J(p, q)` on sheet 1 for `S = 1` and `S = X`, keyed by [`PairLabel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairValues {
    pub dx: [C64; 7],
    pub xdx: [C64; 7],
    /// The evaluator actually used (never `Auto`).
    pub method: PeriodMethod,
}

impl PairValues {
    pub fn get(&self, l: PairLabel) -> (C64, C64) {
        (self.dx[l.index()], self.xdx[l.index()])
    }

    pub fn scale(&self) -> f64 {
        self.dx.iter().chain(self.xdx.iter()).fold(0.0, |s, v| s.max(v.norm()))
    }
}

pub fn pair_values_agm(bps: &BranchPointSet, min_condition: f64) -> Result<PairValues, CurveError> {
    let m = bps.sextic()?;
    // The tables are normalised for y = −i·w, so J = −i·I.
    let j = |s: Linear| integrals_conjugate(&m, &s, min_condition).map(|t| t.values.map(|v| -I * v));
    Ok(PairValues { dx: j(Linear::one())?, xdx: j(Linear::x())?, method: PeriodMethod::Agm })
}

pub fn pair_values_oracle(bps: &BranchPointSet, tol: f64) -> Result<PairValues, CurveError> {
    let sheet = bps.sheet();
    let mut dx = [C64::from(0.0); 7];
    let mut xdx = dx;
    for l in PairLabel::ALL {
        let (i, j) = l.endpoints();
        // The inner lip is the left side of each cut's stored orientation.
        let lip = if SHEET_CUTS.contains(&(i, j)) {
            Some(Lip::Left)
        } else if SHEET_CUTS.contains(&(j, i)) {
            Some(Lip::Right)
        } else {
            None
        };
        let leg = |s: &Linear| segment(&sheet, Endpoint::Root(i), Endpoint::Root(j), lip, s, tol);
        dx[l.index()] = leg(&Linear::one())?;
        xdx[l.index()] = leg(&Linear::x())?;
    }
    Ok(PairValues { dx, xdx, method: PeriodMethod::Oracle })
}

pub fn pair_values(bps: &BranchPointSet, opts: &EvalOptions) -> Result<PairValues, CurveError> {
    match opts.method {
        PeriodMethod::Agm => pair_values_agm(bps, opts.min_condition),
        PeriodMethod::Oracle => pair_values_oracle(bps, opts.tol_quad),
        PeriodMethod::Auto => match pair_values_agm(bps, opts.min_condition) {
            // Ill-conditioned first steps (a ≈ 0) and successor models with a
            // collapsed pair (far along the a < 0 tail) go to quadrature.
            Err(CurveError::Richelot(
                RichelotError::IllConditioned { .. }
                | RichelotError::Hyperpoly(_)
                | RichelotError::UnsupportedOrdering(_),
            )) => pair_values_oracle(bps, opts.tol_quad),
            other => other,
        },
    }
}

/// `(∮ dX/Y, ∮ X dX/Y)` over a cycle.
pub fn cycle_integrals(e: &CycleExpr, pv: &PairValues) -> (C64, C64) {
    let x = cycle_to_pairs(e);
    (x.evaluate(&pv.dx), x.evaluate(&pv.xdx))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodData {
    pub params: CurveParams,
    /// `[∮𝔞₀, ∮𝔞₁, ∮𝔟₀, ∮𝔟₁]` of `dX/Y` (row 0) and `X dX/Y` (row 1).
    pub periods: [[C64; 4]; 2],
    /// `A[i][j] = ∮_{𝔞ⱼ} ωᵢ`.
    pub a_mat: Matrix2<C64>,
    pub b_mat: Matrix2<C64>,
    /// `τ = A⁻¹B`, the period matrix of the normalised differentials `A⁻¹ω`.
    pub tau: Matrix2<C64>,
    pub a_inv: Matrix2<C64>,
    pub pairs: PairValues,
}

impl PeriodData {
    pub fn symmetry_defect(&self) -> f64 {
        (self.tau[(0, 1)] - self.tau[(1, 0)]).norm() / self.tau.iter().fold(0.0f64, |s, v| s.max(v.norm()))
    }

    /// Smallest eigenvalue of `Im τ` (symmetrised).
    pub fn im_tau_min_eigenvalue(&self) -> f64 {
        let im = im_part(&self.tau);
        let (p, q, r) = (im[(0, 0)], 0.5 * (im[(0, 1)] + im[(1, 0)]), im[(1, 1)]);
        0.5 * (p + r) - (0.25 * (p - r).powi(2) + q * q).sqrt()
    }

    /// Normalised vector `A⁻¹(∫ dX/Y, ∫ X dX/Y)`.
    pub fn normalise(&self, raw: (C64, C64)) -> Vector2<C64> {
        self.a_inv * Vector2::new(raw.0, raw.1)
    }
}

pub(crate) fn im_part(m: &Matrix2<C64>) -> Matrix2<f64> {
    m.map(|z| z.im)
}

pub(crate) fn re_part(m: &Matrix2<C64>) -> Matrix2<f64> {
    m.map(|z| z.re)
}

/// Builds [`PeriodData`] from pair values, checking the Riemann relations
/// (`τ` symmetric to `1e−6` relative, `Im τ` positive definite).
pub fn period_data_from_pairs(params: CurveParams, pairs: PairValues) -> Result<PeriodData, CurveError> {
    let mut periods = [[C64::from(0.0); 4]; 2];
    for (k, c) in BasisCycle::ALL.iter().enumerate() {
        let (d, x) = cycle_integrals(&CycleExpr::basis(*c), &pairs);
        periods[0][k] = d;
        periods[1][k] = x;
    }
    let a_mat = Matrix2::new(periods[0][0], periods[0][1], periods[1][0], periods[1][1]);
    let b_mat = Matrix2::new(periods[0][2], periods[0][3], periods[1][2], periods[1][3]);
    let det = a_mat.determinant();
    let rel = det.norm() / a_mat.iter().fold(0.0f64, |s, v| s.max(v.norm_sqr()));
    let a_inv = match a_mat.try_inverse() {
        Some(inv) if rel > 1e-12 => inv,
        _ => return Err(CurveError::IllConditioned(rel)),
    };
    let tau = a_inv * b_mat;
    let pd = PeriodData { params, periods, a_mat, b_mat, tau, a_inv, pairs };
    let sym = pd.symmetry_defect();
    if !(sym < 1e-6) {
        return Err(CurveError::PeriodCheck(format!("τ is not symmetric (relative defect {sym:.2e})")));
    }
    let ev = pd.im_tau_min_eigenvalue();
    if !(ev > 0.0) {
        return Err(CurveError::PeriodCheck(format!("Im τ is not positive definite (λ_min = {ev:.3e})")));
    }
    Ok(pd)
}

pub fn period_matrix(p: CurveParams, opts: &EvalOptions) -> Result<PeriodData, CurveError> {
    let bps = quotient_branch_points(p)?;
    period_data_from_pairs(p, pair_values(&bps, opts)?)
}

/// A characteristic `[α₁ α₂; β₁ β₂]`, standing for the vector `β + τα`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Characteristic {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
}

impl Characteristic {
    pub const fn new(alpha: [f64; 2], beta: [f64; 2]) -> Self {
        Self { alpha, beta }
    }

    /// Solves `z = β + τα` for real `α`, `β`.
    pub fn from_vector(z: &Vector2<C64>, tau: &Matrix2<C64>) -> Self {
        let im = im_part(tau);
        let zi = Vector2::new(z[0].im, z[1].im);
        let alpha = im.try_inverse().map(|inv| inv * zi).unwrap_or_else(|| Vector2::new(f64::NAN, f64::NAN));
        let beta = Vector2::new(z[0].re, z[1].re) - re_part(tau) * alpha;
        Self { alpha: [alpha[0], alpha[1]], beta: [beta[0], beta[1]] }
    }

    pub fn to_vector(&self, tau: &Matrix2<C64>) -> Vector2<C64> {
        let al = Vector2::new(C64::from(self.alpha[0]), C64::from(self.alpha[1]));
        Vector2::new(C64::from(self.beta[0]), C64::from(self.beta[1])) + tau * al
    }

    /// Representative with every entry in `[0, 1)`.
    pub fn reduced(&self) -> Self {
        let r = |x: f64| {
            let y = x - x.floor();
            if y >= 1.0 - 1e-12 {
                0.0
            } else {
                y
            }
        };
        Self { alpha: self.alpha.map(r), beta: self.beta.map(r) }
    }

    /// Largest distance to an integer among the entries of `self − other`,
    /// i.e. how far the two are from agreeing modulo the period lattice.
    pub fn distance_mod1(&self, other: &Self) -> f64 {
        let d = |x: f64, y: f64| {
            let t = x - y;
            (t - t.round()).abs()
        };
        d(self.alpha[0], other.alpha[0])
            .max(d(self.alpha[1], other.alpha[1]))
            .max(d(self.beta[0], other.beta[0]))
            .max(d(self.beta[1], other.beta[1]))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            alpha: [self.alpha[0] + o.alpha[0], self.alpha[1] + o.alpha[1]],
            beta: [self.beta[0] + o.beta[0], self.beta[1] + o.beta[1]],
        }
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        write!(f, "[{:.4} {:.4}; {:.4} {:.4}]", r.alpha[0], r.alpha[1], r.beta[0], r.beta[1])
    }
}

/// `A_{B₁}(Bⱼ)` for `j = 1..=6`.
pub const EXPECTED_ABEL: [Characteristic; 6] = [
    Characteristic::new([0.0, 0.0], [0.0, 0.0]),
    Characteristic::new([0.5, 0.5], [0.0, 0.0]),
    Characteristic::new([0.0, 0.0], [0.5, 0.0]),
    Characteristic::new([0.5, 0.0], [0.0, 0.5]),
    Characteristic::new([0.5, 0.0], [0.5, 0.0]),
    Characteristic::new([0.5, 0.5], [0.0, 0.5]),
];
pub const EXPECTED_K_B1: Characteristic = Characteristic::new([0.0, 0.5], [0.5, 0.5]);
pub const EXPECTED_A_INF_B1: Characteristic = Characteristic::new([0.5, 0.0], [2.0 / 3.0, 0.0]);
pub const EXPECTED_K_INF: Characteristic = Characteristic::new([0.5, 0.5], [1.0 / 6.0, 0.5]);

/// Tolerance of the characteristic checks.
pub const CHARACTERISTIC_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct AbelData {
    /// `A_{B₁}(Bⱼ)` as vectors in `C²`.
    pub images: [Vector2<C64>; 6],
    pub chars: [Characteristic; 6],
    pub k_b1: Characteristic,
    /// `A_{∞₊}(B₁)`, with `∞₊` the point at infinity on sheet 2.
    pub a_inf_b1: Characteristic,
    /// `K_{∞₊} = A_{∞₊}(B₁) + K_{B₁}`.
    pub k_inf: Characteristic,
}

impl AbelData {
    /// Largest deviation from the expected table, and what it belongs to.
    pub fn max_deviation(&self) -> (f64, String) {
        let mut worst = (0.0, String::from("none"));
        let mut see = |d: f64, what: String| {
            if d > worst.0 || d.is_nan() {
                worst = (d, what);
            }
        };
        for (j, (c, e)) in self.chars.iter().zip(EXPECTED_ABEL.iter()).enumerate() {
            see(c.distance_mod1(e), format!("A_B1(B{})", j + 1));
        }
        see(self.k_b1.distance_mod1(&EXPECTED_K_B1), "K_B1".into());
        see(self.a_inf_b1.distance_mod1(&EXPECTED_A_INF_B1), "A_inf(B1)".into());
        see(self.k_inf.distance_mod1(&EXPECTED_K_INF), "K_inf".into());
        worst
    }

    pub fn verify(&self, tol: f64) -> Result<(), CurveError> {
        let (d, what) = self.max_deviation();
        if d < tol {
            Ok(())
        } else {
            Err(CurveError::ConventionMismatch { what, distance: d })
        }
    }
}

/// Sheet-1 arcs `γ₁(j, j+1)` between consecutive labels, in `J` values.
fn arcs(pv: &PairValues) -> [(C64, C64); 5] {
    let neg = |(d, x): (C64, C64)| (-d, -x);
    [
        neg(pv.get(PairLabel::BC)),
        neg(pv.get(PairLabel::AB)),
        pv.get(PairLabel::AA),
        pv.get(PairLabel::ApBp),
        pv.get(PairLabel::BpCp),
    ]
}

/// Images of the branch points under the Abel map based at `B₁`, the vector
/// of Riemann constants `K_{B₁} = −(A(B₅) + A(B₆))`, and the change of base
/// point to `∞₊` (one quadrature along the horizontal ray from `B₁`).
pub fn abel_characteristics(pd: &PeriodData, bps: &BranchPointSet, tol_quad: f64) -> Result<AbelData, CurveError> {
    let mut images = [Vector2::new(C64::from(0.0), C64::from(0.0)); 6];
    let mut acc = (C64::from(0.0), C64::from(0.0));
    for (j, arc) in arcs(&pd.pairs).iter().enumerate() {
        acc = (acc.0 + arc.0, acc.1 + arc.1);
        images[j + 1] = pd.normalise(acc);
    }
    let chars = images.map(|z| Characteristic::from_vector(&z, &pd.tau));
    let k_vec = -(images[4] + images[5]);
    let k_b1 = Characteristic::from_vector(&k_vec, &pd.tau);

    let sheet2 = bps.sheet().flipped();
    let c_index = 4; // B₁ = c in the model order
    let inf = |s: &Linear| infinity_integral(&sheet2, s, Endpoint::Root(c_index), C64::from(1.0), tol_quad);
    let a_inf_vec = pd.normalise((inf(&Linear::one())?, inf(&Linear::x())?));
    let a_inf_b1 = Characteristic::from_vector(&a_inf_vec, &pd.tau);
    let k_inf = Characteristic::from_vector(&(a_inf_vec + k_vec), &pd.tau);
    Ok(AbelData { images, chars, k_b1, a_inf_b1, k_inf })
}

/// `K_{∞₊} = τ(½, ½) + (⅙, ½)`.
pub fn riemann_constants_infinity(pd: &PeriodData) -> Vector2<C64> {
    EXPECTED_K_INF.to_vector(&pd.tau)
}

/// Matrix of the antiholomorphic involution on `(𝔞₀, 𝔞₁, 𝔟₀, 𝔟₁)`
/// (cycles as row vectors, acting on the right).
pub const INVOLUTION_MATRIX: [[i64; 4]; 4] = [[2, 0, 0, -3], [1, 2, -3, 2], [2, 1, -2, -1], [1, 0, 0, -2]];

/// The intersection form on `(𝔞₀, 𝔞₁, 𝔟₀, 𝔟₁)`.
pub const INTERSECTION_FORM: [[i64; 4]; 4] = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]];

fn matmul(x: &[[i64; 4]; 4], y: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

fn transpose(x: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = x[j][i];
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvolutionReport {
    pub square_is_identity: bool,
    pub reverses_intersection_form: bool,
    pub plus_cycle_anti_invariant: bool,
    pub minus_cycle_anti_invariant: bool,
}

impl InvolutionReport {
    pub fn all_pass(&self) -> bool {
        self.square_is_identity
            && self.reverses_intersection_form
            && self.plus_cycle_anti_invariant
            && self.minus_cycle_anti_invariant
    }

    pub fn lines(&self) -> [(&'static str, bool); 4] {
        [
            ("M^2 = Id", self.square_is_identity),
            ("M J M^T = -J", self.reverses_intersection_form),
            ("(4,3,-9,3) M = -(4,3,-9,3)", self.plus_cycle_anti_invariant),
            ("(5,3,-9,0) M = -(5,3,-9,0)", self.minus_cycle_anti_invariant),
        ]
    }
}

/// Exact integer checks of the involution matrix.
pub fn involution_matrix_checks() -> InvolutionReport {
    let m = &INVOLUTION_MATRIX;
    let mut id = [[0i64; 4]; 4];
    for (k, row) in id.iter_mut().enumerate() {
        row[k] = 1;
    }
    let mjm = matmul(&matmul(m, &INTERSECTION_FORM), &transpose(m));
    let neg_j = INTERSECTION_FORM.map(|r| r.map(|v| -v));
    let anti = |s: IntSet| {
        let c = cycle_c(s);
        let i = c.involuted();
        i.as_array() == c.as_array().map(|v| -v)
    };
    InvolutionReport {
        square_is_identity: matmul(m, m) == id,
        reverses_intersection_form: mjm == neg_j,
        plus_cycle_anti_invariant: anti(IntSet::PLUS),
        minus_cycle_anti_invariant: anti(IntSet::MINUS),
    }
}
