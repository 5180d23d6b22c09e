//! Polynomial primitives for the Richelot construction.
//!
//! A sextic `P·Q·R` is stored as three monic quadratics given by their root
//! pairs. The bracket `[f, g] = f′g − g′f` of two quadratics is again (at
//! most) quadratic, and the triple `U = [Q,R]`, `V = [R,P]`, `W = [P,Q]`
//! drives one Richelot step.

use crate::scalar::{lit, Real};
use num_complex::Complex;
use thiserror::Error;

/// Minimum pairwise root separation, relative to the root magnitude scale.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;
/// Largest imaginary residue tolerated on a resolvent root that must be real.
pub const REALNESS_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperpolyError {
    #[error("degenerate sextic: roots {i} and {j} are {separation:.3e} apart")]
    Degenerate { i: usize, j: usize, separation: f64 },
    #[error("resolvent root has imaginary part {residue:.3e} where a real value is required")]
    NonReal { residue: f64 },
    #[error("vanishing denominator in resolvent root formula for pair {pair}")]
    VanishingDenominator { pair: &'static str },
    #[error("roots are not in the required order: {0}")]
    Ordering(String),
}

/// Coefficients `c2·x² + c1·x + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadCoeffs<T> {
    pub c2: Complex<T>,
    pub c1: Complex<T>,
    pub c0: Complex<T>,
}

impl<T: Real> QuadCoeffs<T> {
    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        (self.c2 * x + self.c1) * x + self.c0
    }

    /// Roots by the quadratic formula; `None` if the quadratic degenerates
    /// to a lower degree.
    pub fn roots(&self) -> Option<(Complex<T>, Complex<T>)> {
        if self.c2.norm() == T::zero() {
            return None;
        }
        let disc = (self.c1 * self.c1 - self.c2 * self.c0 * lit::<T>(4.0)).sqrt();
        // Avoid cancellation: compute the larger root first.
        let q = if (self.c1.conj() * disc).re >= T::zero() {
            -(self.c1 + disc) / lit::<T>(2.0)
        } else {
            -(self.c1 - disc) / lit::<T>(2.0)
        };
        if q.norm() == T::zero() {
            return Some((q, q));
        }
        Some((q / self.c2, self.c0 / q))
    }
}

/// Monic quadratic `(x − r1)(x − r2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic<T> {
    pub r1: Complex<T>,
    pub r2: Complex<T>,
}

impl<T: Real> Quadratic<T> {
    pub fn new(r1: Complex<T>, r2: Complex<T>) -> Self {
        Self { r1, r2 }
    }

    pub fn real(r1: T, r2: T) -> Self {
        Self::new(Complex::from(r1), Complex::from(r2))
    }

    pub fn sum(&self) -> Complex<T> {
        self.r1 + self.r2
    }

    pub fn product(&self) -> Complex<T> {
        self.r1 * self.r2
    }

    pub fn coeffs(&self) -> QuadCoeffs<T> {
        QuadCoeffs { c2: Complex::from(T::one()), c1: -self.sum(), c0: self.product() }
    }

    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        (x - self.r1) * (x - self.r2)
    }
}

/// `[f, g] = f′g − g′f` on coefficient triples.
pub fn bracket_coeffs<T: Real>(f: &QuadCoeffs<T>, g: &QuadCoeffs<T>) -> QuadCoeffs<T> {
    // f′ = 2 f2 x + f1. The cubic terms cancel identically.
    let two = lit::<T>(2.0);
    QuadCoeffs { c2: f.c2 * g.c1 - f.c1 * g.c2, c1: (f.c2 * g.c0 - f.c0 * g.c2) * two, c0: f.c1 * g.c0 - f.c0 * g.c1 }
}

pub fn bracket<T: Real>(f: &Quadratic<T>, g: &Quadratic<T>) -> QuadCoeffs<T> {
    bracket_coeffs(&f.coeffs(), &g.coeffs())
}

/// Linear numerator `S(x) = s0 + s1·x` of a holomorphic differential `S dx / y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linear<T> {
    pub s0: Complex<T>,
    pub s1: Complex<T>,
}

impl<T: Real> Linear<T> {
    pub fn new(s0: Complex<T>, s1: Complex<T>) -> Self {
        Self { s0, s1 }
    }

    pub fn real(s0: T, s1: T) -> Self {
        Self::new(Complex::from(s0), Complex::from(s1))
    }

    /// `S = 1`, the differential `dx/y`.
    pub fn one() -> Self {
        Self::real(T::one(), T::zero())
    }

    /// `S = x`, the differential `x dx/y`.
    pub fn x() -> Self {
        Self::real(T::zero(), T::one())
    }

    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        self.s0 + self.s1 * x
    }

    pub fn conj(&self) -> Self {
        Self::new(self.s0.conj(), self.s1.conj())
    }
}

/// The sextic `P·Q·R` with pairs `P = (a,a′)`, `Q = (b,b′)`, `R = (c,c′)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SexticModel<T> {
    pub p: Quadratic<T>,
    pub q: Quadratic<T>,
    pub r: Quadratic<T>,
    pub conjugate_paired: bool,
}

impl<T: Real> SexticModel<T> {
    /// Real model with roots `a < a′ < b < b′ < c < c′`.
    pub fn real(roots: [T; 6]) -> Result<Self, HyperpolyError> {
        if roots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(HyperpolyError::Ordering(format!("{roots:?} is not strictly increasing")));
        }
        let m = Self {
            p: Quadratic::real(roots[0], roots[1]),
            q: Quadratic::real(roots[2], roots[3]),
            r: Quadratic::real(roots[4], roots[5]),
            conjugate_paired: false,
        };
        m.check_nondegenerate()?;
        Ok(m)
    }

    /// Conjugate-paired model `a′ = ā`, `b′ = b̄`, `c′ = c̄` with
    /// `Re a < Re b < Re c`.
    pub fn conjugate(a: Complex<T>, b: Complex<T>, c: Complex<T>) -> Result<Self, HyperpolyError> {
        if !(a.re < b.re && b.re < c.re) {
            return Err(HyperpolyError::Ordering(format!(
                "real parts {:?}, {:?}, {:?} are not increasing",
                a.re, b.re, c.re
            )));
        }
        let m = Self {
            p: Quadratic::new(a, a.conj()),
            q: Quadratic::new(b, b.conj()),
            r: Quadratic::new(c, c.conj()),
            conjugate_paired: true,
        };
        m.check_nondegenerate()?;
        Ok(m)
    }

    /// Roots in the order `(a, a′, b, b′, c, c′)`.
    pub fn roots(&self) -> [Complex<T>; 6] {
        [self.p.r1, self.p.r2, self.q.r1, self.q.r2, self.r.r1, self.r.r2]
    }

    /// Largest root modulus (at least one), the length scale for thresholds.
    pub fn scale(&self) -> T {
        self.roots().iter().fold(T::one(), |s, r| s.max(r.norm()))
    }

    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        self.p.eval(x) * self.q.eval(x) * self.r.eval(x)
    }

    pub fn check_nondegenerate(&self) -> Result<(), HyperpolyError> {
        let r = self.roots();
        let thr = lit::<T>(DEGENERACY_THRESHOLD) * self.scale();
        for i in 0..6 {
            for j in i + 1..6 {
                let sep = (r[i] - r[j]).norm();
                if !(sep > thr) {
                    return Err(HyperpolyError::Degenerate { i, j, separation: sep.to_f64().unwrap_or(f64::NAN) });
                }
            }
        }
        Ok(())
    }
}

/// Resolvent triple `(U, V, W) = ([Q,R], [R,P], [P,Q])`.
pub fn resolvent_triple<T: Real>(m: &SexticModel<T>) -> Result<[QuadCoeffs<T>; 3], HyperpolyError> {
    m.check_nondegenerate()?;
    Ok([bracket(&m.q, &m.r), bracket(&m.r, &m.p), bracket(&m.p, &m.q)])
}

/// The six resolvent roots, each pair ordered by the `∓` sign of the
/// closed-form root formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventRoots<T> {
    pub u: T,
    pub u2: T,
    pub v: T,
    pub v2: T,
    pub w: T,
    pub w2: T,
}

impl<T: Real> ResolventRoots<T> {
    pub fn as_array(&self) -> [T; 6] {
        [self.u, self.u2, self.v, self.v2, self.w, self.w2]
    }
}

fn realize<T: Real>(z: Complex<T>) -> Result<T, HyperpolyError> {
    let tol = lit::<T>(REALNESS_THRESHOLD) * z.re.abs().max(T::one());
    if z.im.abs() > tol {
        return Err(HyperpolyError::NonReal { residue: z.im.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(z.re)
}

/// Roots of the bracket of the pairs `(x,x′)` and `(y,y′)`:
/// `(yy′ − xx′ ∓ D) / (y + y′ − x − x′)` with
/// `D = √((x−y)(x−y′)(x′−y)(x′−y′))` on the principal branch.
fn pair_roots<T: Real>(x: &Quadratic<T>, y: &Quadratic<T>, pair: &'static str) -> Result<(T, T), HyperpolyError> {
    let d = ((x.r1 - y.r1) * (x.r1 - y.r2) * (x.r2 - y.r1) * (x.r2 - y.r2)).sqrt();
    let den = y.sum() - x.sum();
    let scale = x.sum().norm().max(y.sum().norm()).max(T::one());
    if den.norm() <= lit::<T>(DEGENERACY_THRESHOLD) * scale {
        return Err(HyperpolyError::VanishingDenominator { pair });
    }
    let num = y.product() - x.product();
    Ok((realize((num - d) / den)?, realize((num + d) / den)?))
}

/// Closed-form resolvent roots `u, u′` (from Q, R), `v, v′` (from P, R) and
/// `w, w′` (from P, Q). Real for real-ordered and for conjugate-paired input.
pub fn resolvent_roots<T: Real>(m: &SexticModel<T>) -> Result<ResolventRoots<T>, HyperpolyError> {
    m.check_nondegenerate()?;
    resolvent_roots_unchecked(m)
}

/// As [`resolvent_roots`] without the separation check; the formulas stay
/// well defined when the two roots of one pair coincide.
pub(crate) fn resolvent_roots_unchecked<T: Real>(m: &SexticModel<T>) -> Result<ResolventRoots<T>, HyperpolyError> {
    let (u, u2) = pair_roots(&m.q, &m.r, "(u,u')")?;
    let (v, v2) = pair_roots(&m.p, &m.r, "(v,v')")?;
    let (w, w2) = pair_roots(&m.p, &m.q, "(w,w')")?;
    Ok(ResolventRoots { u, u2, v, v2, w, w2 })
}

/// Determinant of the coefficient matrix of `P, Q, R` in the basis `(1, x, x²)`.
pub fn delta_det<T: Real>(m: &SexticModel<T>) -> Complex<T> {
    delta_det_coeffs([m.p.coeffs(), m.q.coeffs(), m.r.coeffs()])
}

/// Determinant of three arbitrary coefficient triples (same layout as [`delta_det`]).
pub fn delta_det_coeffs<T: Real>(rows: [QuadCoeffs<T>; 3]) -> Complex<T> {
    let e = |i: usize| [rows[i].c0, rows[i].c1, rows[i].c2];
    let (r0, r1, r2) = (e(0), e(1), e(2));
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}
