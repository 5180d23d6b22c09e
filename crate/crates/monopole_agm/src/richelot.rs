//! Richelot's genus-2 arithmetic-geometric mean.
//!
//! For a real sextic with roots `a < a′ < b < b′ < c < c′` one step replaces
//! the pairs by the resolvent roots `(v, w, w′, u, u′, v′)`; the pairs
//! converge quadratically to limits `α, β, γ` and
//!
//! ```text
//!     I(a,a′) = π T S(α) / ((α − β)(α − γ)),   T = ∏ tₙ,
//!     tₙ = 2√Δₙ / √((b+b′−a−a′)(c+c′−b−b′)(c+c′−a−a′)),
//! ```
//!
//! and cyclically for `(b,b′)` and `(c,c′)`. Here `I(p,q)` is the integral of
//! `S(x) dx / y` with `y = −i·w`, `w` the branch of `√(PQR)` that behaves like
//! `+x³` at infinity with cuts on `[a,a′]`, `[b,b′]`, `[c,c′]`, evaluated on
//! the upper lip (so `y² = −PQR`, and `y > 0` on the upper lip of `[a,a′]`).
//!
//! The gap integrals `I(a′,b)` and `I(b′,c)` come from the same closed form
//! applied to the real model obtained by the substitution `x = p − 1/X` with
//! `p` inside `(a,a′)`, which rotates the root order to
//! `(a′,b), (b′,c), (c′,a)`.
//!
//! # Complex-conjugate branch points
//!
//! For `a′ = ā`, `b′ = b̄`, `c′ = c̄` the resolvent roots are real, so a
//! single step lands on a real model and every table entry is a
//! half-integer combination, times `t₀`, of the four real quantities
//! `I′(a₁,a₁′)`, `I′(b₁,b₁′)`, `I′(a₁′,b₁)`, `I′(b₁′,c₁)` of the successor.
//! The combination depends only on how the six resolvent roots are ordered;
//! the two orderings that occur for conjugate-paired sextics are tabulated
//! below (see [`FirstStepOrdering`]). For those entries the branch of `w` has
//! cuts `(c′,b′)`, `(a′,a)`, `(b,c)`, with `Im a < 0`, and integrals along a
//! cut use the lip facing the other branch points. `t₀` uses principal
//! square roots.

use crate::hyperpoly::{
    delta_det, resolvent_roots, resolvent_roots_unchecked, HyperpolyError, Linear, Quadratic, SexticModel,
};
use crate::scalar::{lit, Real};
use num_complex::Complex;
use thiserror::Error;

pub const MAX_STEPS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RichelotError {
    #[error(transparent)]
    Hyperpoly(#[from] HyperpolyError),
    #[error("Richelot iteration did not converge in {0} steps")]
    NoConvergence(usize),
    #[error("negative radicand {0:.3e} in the t-factor of a real step")]
    NegativeRadicand(f64),
    #[error("first-step resolvent ordering {0} is not one of the tabulated cases")]
    UnsupportedOrdering(String),
    #[error("first conjugate step is ill-conditioned (normalised Δ₀ = {condition:.3e} < {threshold:.1e})")]
    IllConditioned { condition: f64, threshold: f64 },
    #[error("expected a {0} sextic")]
    WrongModel(&'static str),
}

/// Labels of the seven tabulated branch-pair integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairLabel {
    AA,
    BB,
    CC,
    AB,
    ApBp,
    BC,
    BpCp,
}

impl PairLabel {
    pub const ALL: [PairLabel; 7] =
        [PairLabel::AA, PairLabel::BB, PairLabel::CC, PairLabel::AB, PairLabel::ApBp, PairLabel::BC, PairLabel::BpCp];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Root indices `(from, to)` into `(a, a′, b, b′, c, c′)`.
    pub fn endpoints(self) -> (usize, usize) {
        match self {
            PairLabel::AA => (0, 1),
            PairLabel::BB => (2, 3),
            PairLabel::CC => (4, 5),
            PairLabel::AB => (0, 2),
            PairLabel::ApBp => (1, 3),
            PairLabel::BC => (2, 4),
            PairLabel::BpCp => (3, 5),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairLabel::AA => "(a,a')",
            PairLabel::BB => "(b,b')",
            PairLabel::CC => "(c,c')",
            PairLabel::AB => "(a,b)",
            PairLabel::ApBp => "(a',b')",
            PairLabel::BC => "(b,c)",
            PairLabel::BpCp => "(b',c')",
        }
    }
}

/// Values of the seven branch-pair integrals for one differential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairIntegralTable<T> {
    pub values: [Complex<T>; 7],
}

impl<T: Real> PairIntegralTable<T> {
    pub fn get(&self, l: PairLabel) -> Complex<T> {
        self.values[l.index()]
    }

    /// Largest entry modulus.
    pub fn scale(&self) -> T {
        self.values.iter().fold(T::zero(), |s, v| s.max(v.norm()))
    }
}

/// The Richelot orbit of a real sextic.
#[derive(Debug, Clone, PartialEq)]
pub struct RichelotOrbit<T> {
    pub states: Vec<[T; 6]>,
    pub t_factors: Vec<T>,
    /// Common limits `(M_a, M_b, M_c)` of the three pairs.
    pub limits: [T; 3],
    /// `T = ∏ tₙ`.
    pub t_product: T,
}

/// `2√Δ / √((b+b′−a−a′)(c+c′−b−b′)(c+c′−a−a′))` with principal roots.
pub fn t_factor<T: Real>(m: &SexticModel<T>) -> Complex<T> {
    let (sp, sq, sr) = (m.p.sum(), m.q.sum(), m.r.sum());
    let den = (sq - sp) * (sr - sq) * (sr - sp);
    delta_det(m).sqrt() * lit::<T>(2.0) / den.sqrt()
}

/// One real Richelot step: successor roots `(v, w, w′, u, u′, v′)` and `tₙ`.
pub fn richelot_step<T: Real>(roots: [T; 6]) -> Result<([T; 6], T), RichelotError> {
    SexticModel::real(roots)?;
    step_core(roots)
}

fn step_core<T: Real>(roots: [T; 6]) -> Result<([T; 6], T), RichelotError> {
    let m = SexticModel {
        p: Quadratic::real(roots[0], roots[1]),
        q: Quadratic::real(roots[2], roots[3]),
        r: Quadratic::real(roots[4], roots[5]),
        conjugate_paired: false,
    };
    let r = resolvent_roots_unchecked(&m)?;
    let mut next = [r.v, r.w, r.w2, r.u, r.u2, r.v2];
    // Close to convergence a pair can come out reversed by a few ulps; such
    // a pair is collapsed onto its midpoint instead of being rejected.
    let slack = T::epsilon() * lit(64.0) * m.scale();
    for k in 0..5 {
        let d = next[k + 1] - next[k];
        if d < -slack || d.is_nan() {
            return Err(
                HyperpolyError::Ordering(format!("successor {next:?} violates v ≤ w ≤ w′ ≤ u ≤ u′ ≤ v′")).into()
            );
        }
        if d < T::zero() {
            let mid = (next[k] + next[k + 1]) * lit(0.5);
            next[k] = mid;
            next[k + 1] = mid;
        }
    }
    let (sp, sq, sr) = (m.p.sum().re, m.q.sum().re, m.r.sum().re);
    let radicand = delta_det(&m).re / ((sq - sp) * (sr - sq) * (sr - sp));
    if !(radicand > T::zero()) {
        return Err(RichelotError::NegativeRadicand(radicand.to_f64().unwrap_or(f64::NAN)));
    }
    Ok((next, lit::<T>(2.0) * radicand.sqrt()))
}

/// Iterates the Richelot step until every pair agrees to a few ulps.
///
/// Pairs converge at different rates, so once the first step has been
/// validated the iteration tolerates pairs that have already collapsed.
pub fn richelot_limits<T: Real>(roots: [T; 6]) -> Result<RichelotOrbit<T>, RichelotError> {
    SexticModel::real(roots)?;
    let scale = roots.iter().fold(T::one(), |s, r| s.max(r.abs()));
    let tol = T::epsilon() * lit(8.0) * scale;
    let mut states = vec![roots];
    let mut t_factors = Vec::new();
    let mut cur = roots;
    let gap = |r: &[T; 6]| (r[1] - r[0]).max(r[3] - r[2]).max(r[5] - r[4]);
    while gap(&cur) > tol {
        if t_factors.len() >= MAX_STEPS {
            return Err(RichelotError::NoConvergence(MAX_STEPS));
        }
        let (next, t) = step_core(cur)?;
        if gap(&next) >= gap(&cur) && t_factors.len() > 2 {
            // Round-off floor reached.
            break;
        }
        cur = next;
        t_factors.push(t);
        states.push(cur);
    }
    let half = lit::<T>(0.5);
    let limits = [(cur[0] + cur[1]) * half, (cur[2] + cur[3]) * half, (cur[4] + cur[5]) * half];
    let t_product = t_factors.iter().fold(T::one(), |p, &t| p * t);
    Ok(RichelotOrbit { states, t_factors, limits, t_product })
}

/// `(I(a,a′), I(b,b′), I(c,c′))` from the limits of the orbit.
pub fn pair_closed_forms<T: Real>(orbit: &RichelotOrbit<T>, s: &Linear<T>) -> [Complex<T>; 3] {
    let [al, be, ga] = orbit.limits;
    let k = T::PI() * orbit.t_product;
    let at = |x: T, y: T, z: T| s.eval(Complex::from(x)) * (k / ((x - y) * (x - z)));
    [at(al, be, ga), at(be, al, ga), at(ga, al, be)]
}

/// The four real-model quantities `I(a,a′)`, `I(b,b′)`, `I(a′,b)`, `I(b′,c)`;
/// the first two are real for real `S`, the gaps purely imaginary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealBasis<T> {
    pub aa: Complex<T>,
    pub bb: Complex<T>,
    pub cc: Complex<T>,
    pub gap_ab: Complex<T>,
    pub gap_bc: Complex<T>,
}

/// Evaluates [`RealBasis`] with two Richelot runs (direct and Möbius-shifted).
///
/// The substitution `x = p − 1/X` with `p` the midpoint of one pair rotates
/// the cyclic root order so that both gaps become pairs of the new model.
/// Any pair works as pivot; the one giving the best-separated shifted roots
/// is used, which keeps the shifted model well scaled when a pair of the
/// input has nearly collapsed.
pub fn real_basis<T: Real>(roots: [T; 6], s: &Linear<T>) -> Result<RealBasis<T>, RichelotError> {
    let orbit = richelot_limits(roots)?;
    let [aa, bb, cc] = pair_closed_forms(&orbit, s);

    let half = lit::<T>(0.5);
    let mut best: Option<(T, T, [T; 6], [usize; 6])> = None;
    for pivot in 0..3 {
        let p = (roots[2 * pivot] + roots[2 * pivot + 1]) * half;
        let mapped = roots.map(|r| T::one() / (p - r));
        let mut idx = [0usize, 1, 2, 3, 4, 5];
        idx.sort_by(|&i, &j| mapped[i].partial_cmp(&mapped[j]).expect("finite Möbius images"));
        let scale = mapped.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        let min_gap = idx.windows(2).fold(T::infinity(), |m, w| m.min(mapped[w[1]] - mapped[w[0]]));
        let quality = min_gap / scale;
        if best.as_ref().is_none_or(|b| quality > b.0) {
            best = Some((quality, p, mapped, idx));
        }
    }
    let (_, p, mapped, idx) = best.expect("three pivots tried");
    let k = roots.iter().fold(T::one(), |acc, &r| acc * (p - r)).abs();
    // S(p − 1/X)·dx = ((s0 + s1 p) X − s1) dX / X³ and |F| = k·|∏(X − X_r)| / X⁶.
    let s_new = Linear::new(-s.s1, s.s0 + s.s1 * p);
    let sorted = idx.map(|i| mapped[i]);
    let shifted = pair_closed_forms(&richelot_limits(sorted)?, &s_new);
    // On the gap (a′,b) the branch y is +i|y|-oriented, on (b′,c) −i; the
    // closed form on pair k of the shifted model carries (−1)^k; and
    // |X| = sgn(X)·X on the gap.
    let gap = |lo: usize, orientation: T| -> Complex<T> {
        let kk = (0..3)
            .find(|&kk| {
                let pair = [idx[2 * kk], idx[2 * kk + 1]];
                pair == [lo, lo + 1] || pair == [lo + 1, lo]
            })
            .expect("a gap maps onto a pair of the shifted model");
        let sx = mapped[lo].signum();
        let alt = if kk % 2 == 0 { T::one() } else { -T::one() };
        shifted[kk] * Complex::new(T::zero(), orientation * sx * alt / k.sqrt())
    };
    Ok(RealBasis { aa, bb, cc, gap_ab: gap(1, T::one()), gap_bc: gap(3, -T::one()) })
}

/// All seven entries for a real model. Cross-pair entries follow the real
/// axis on the upper side, e.g. `I(a,b) = I(a,a′) + I(a′,b)`.
pub fn pair_integrals_real<T: Real>(m: &SexticModel<T>, s: &Linear<T>) -> Result<PairIntegralTable<T>, RichelotError> {
    if m.conjugate_paired {
        return Err(RichelotError::WrongModel("real-ordered"));
    }
    let roots = m.roots().map(|z| z.re);
    let b = real_basis(roots, s)?;
    Ok(PairIntegralTable {
        values: [b.aa, b.bb, b.cc, b.aa + b.gap_ab, b.gap_ab + b.bb, b.bb + b.gap_bc, b.gap_bc + b.cc],
    })
}

/// The orderings of the first-step resolvent roots for conjugate-paired
/// sextics, each with its own combination table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstStepOrdering {
    /// `u < v < w < u′ < v′ < w′`
    Uvw,
    /// `w < v < u < w′ < v′ < u′`
    Wvu,
}

impl FirstStepOrdering {
    /// Half-integer coefficients over
    /// `(I′(a₁,a₁′), I′(b₁,b₁′), I′(a₁′,b₁), I′(b₁′,c₁))`, rows in
    /// [`PairLabel::ALL`] order.
    pub fn table(self) -> [[f64; 4]; 7] {
        match self {
            FirstStepOrdering::Uvw => [
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0, -1.0],
                [0.0, 0.0, 0.0, -1.0],
                [0.5, 0.0, 0.0, 0.5],
                [0.5, 0.0, 0.0, -0.5],
                [-0.5, -0.5, 0.5, 0.0],
                [-0.5, -0.5, -0.5, 0.0],
            ],
            FirstStepOrdering::Wvu => [
                [-1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [1.0, 1.0, 0.0, 0.0],
                [-0.5, -0.5, 0.5, 0.0],
                [0.5, 0.5, 0.5, 0.0],
                [-0.5, 0.0, 0.0, -0.5],
                [0.5, 0.0, 0.0, -0.5],
            ],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FirstStepOrdering::Uvw => "u<v<w<u'<v'<w'",
            FirstStepOrdering::Wvu => "w<v<u<w'<v'<u'",
        }
    }
}

/// The first step of a conjugate-paired sextic, independent of `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateStep<T> {
    pub ordering: FirstStepOrdering,
    /// Sorted successor roots `(a₁, a₁′, b₁, b₁′, c₁, c₁′)`.
    pub successor: [T; 6],
    pub t0: Complex<T>,
    /// `|Δ₀|` normalised by the cube of the root scale.
    pub condition: T,
}

/// Default lower bound on [`ConjugateStep::condition`]; below it the
/// successor is too close to singular for the closed forms to hold their
/// accuracy (the step degenerates exactly when the six branch points are
/// concyclic on a circle centred on the real axis).
pub const DEFAULT_MIN_CONDITION: f64 = 1e-4;

/// `|Δ₀|` normalised by the cube of the root scale.
pub fn step_condition<T: Real>(m: &SexticModel<T>) -> T {
    let scale = m.scale();
    delta_det(m).norm() / (scale * scale * scale)
}

pub fn conjugate_step<T: Real>(m: &SexticModel<T>) -> Result<ConjugateStep<T>, RichelotError> {
    if !m.conjugate_paired {
        return Err(RichelotError::WrongModel("conjugate-paired"));
    }
    let condition = step_condition(m);
    let r = resolvent_roots(m)?;
    let ordering = if r.u < r.v && r.v < r.w && r.w < r.u2 && r.u2 < r.v2 && r.v2 < r.w2 {
        FirstStepOrdering::Uvw
    } else if r.w < r.v && r.v < r.u && r.u < r.w2 && r.w2 < r.v2 && r.v2 < r.u2 {
        FirstStepOrdering::Wvu
    } else {
        return Err(RichelotError::UnsupportedOrdering(format!("{:?}", r.as_array())));
    };
    let mut successor = r.as_array();
    successor.sort_by(|a, b| a.partial_cmp(b).expect("finite resolvent roots"));
    Ok(ConjugateStep { ordering, successor, t0: t_factor(m), condition })
}

/// Table entries for a conjugate-paired sextic (with `Im a, Im b, Im c < 0`)
/// from one step to a real model, refusing steps whose normalised `Δ₀` is
/// below `min_condition`.
pub fn integrals_conjugate<T: Real>(
    m: &SexticModel<T>,
    s: &Linear<T>,
    min_condition: T,
) -> Result<PairIntegralTable<T>, RichelotError> {
    if !m.conjugate_paired {
        return Err(RichelotError::WrongModel("conjugate-paired"));
    }
    let condition = step_condition(m);
    if condition < min_condition {
        return Err(RichelotError::IllConditioned {
            condition: condition.to_f64().unwrap_or(0.0),
            threshold: min_condition.to_f64().unwrap_or(0.0),
        });
    }
    let step = conjugate_step(m)?;
    if [m.p.r1, m.q.r1, m.r.r1].iter().any(|z| !(z.im < T::zero())) {
        return Err(RichelotError::WrongModel("conjugate-paired with a, b, c in the lower half-plane"));
    }
    SexticModel::real(step.successor)?;
    let b = real_basis(step.successor, s)?;
    let basis = [b.aa, b.bb, b.gap_ab, b.gap_bc];
    let table = step.ordering.table();
    let mut values = [Complex::from(T::zero()); 7];
    for (v, row) in values.iter_mut().zip(table.iter()) {
        let comb = row.iter().zip(basis.iter()).fold(Complex::from(T::zero()), |acc, (&c, &x)| acc + x * lit::<T>(c));
        *v = comb * step.t0;
    }
    Ok(PairIntegralTable { values })
}
