//! Classical arithmetic-geometric mean and the complete elliptic integral
//! of the first kind it evaluates.

use crate::scalar::{lit, Real};
use thiserror::Error;

/// Hard cap on AGM iterations; quadratic convergence needs far fewer.
pub const MAX_ITERATIONS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AgmError {
    #[error("AGM arguments must be positive and finite (got a = {a}, b = {b}, tol = {tol})")]
    Domain { a: f64, b: f64, tol: f64 },
    #[error("AGM did not converge within {0} iterations")]
    NoConvergence(usize),
}

/// One state of the iteration `a ← (a+b)/2`, `b ← √(ab)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgmState<T> {
    pub a_n: T,
    pub b_n: T,
    pub n: usize,
}

impl<T: Real> AgmState<T> {
    /// Initial state, ordered so that `a_n ≥ b_n`.
    pub fn new(a: T, b: T) -> Self {
        let (a_n, b_n) = if a >= b { (a, b) } else { (b, a) };
        Self { a_n, b_n, n: 0 }
    }

    pub fn step(self) -> Self {
        let a = (self.a_n + self.b_n) / lit(2.0);
        let b = (self.a_n * self.b_n).sqrt();
        // Rounding can leave b a hair above a once they agree to the last ulp.
        Self { a_n: a.max(b), b_n: b.min(a), n: self.n + 1 }
    }

    pub fn gap(&self) -> T {
        self.a_n - self.b_n
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgmResult<T> {
    pub mean: T,
    pub iterations: usize,
}

fn check_domain<T: Real>(a: T, b: T, tol: T) -> Result<(), AgmError> {
    let ok = |x: T| x > T::zero() && x.is_finite();
    if ok(a) && ok(b) && ok(tol) {
        Ok(())
    } else {
        Err(AgmError::Domain {
            a: a.to_f64().unwrap_or(f64::NAN),
            b: b.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Arithmetic-geometric mean `M(a, b)`.
///
/// Iterates until `a_n − b_n < tol · a_n` (relative stopping rule). A
/// tolerance below the working epsilon is clamped to a few ulps so the
/// loop always terminates.
pub fn agm<T: Real>(a: T, b: T, tol: T) -> Result<AgmResult<T>, AgmError> {
    check_domain(a, b, tol)?;
    let tol = tol.max(T::epsilon() * lit(4.0));
    let mut s = AgmState::new(a, b);
    while s.gap() >= tol * s.a_n {
        if s.n >= MAX_ITERATIONS {
            return Err(AgmError::NoConvergence(MAX_ITERATIONS));
        }
        s = s.step();
    }
    let mean = if s.n == 0 { s.a_n } else { (s.a_n + s.b_n) / lit(2.0) };
    Ok(AgmResult { mean, iterations: s.n })
}

/// `∫₀^{π/2} dφ / √(a² cos²φ + b² sin²φ) = π / (2 M(a, b))`.
pub fn elliptic_integral_agm<T: Real>(a: T, b: T) -> Result<T, AgmError> {
    let m = agm(a, b, T::epsilon())?.mean;
    Ok(T::FRAC_PI_2() / m)
}
