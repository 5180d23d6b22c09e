//! Direct evaluation of hyperelliptic contour integrals — the independent
//! oracle every AGM-evaluated quantity is checked against.
//!
//! A branch of `y = √F(x)` for the monic sextic `F` is fixed by choosing
//! three disjoint straight cuts joining the roots in pairs: the function
//!
//! ```text
//!     y(x) = σ · ∏_{cuts (p,q)} (x − m)·√(1 − h²/(x − m)²),   m = (p+q)/2, h = (q−p)/2
//! ```
//!
//! is single-valued off the cuts, behaves like `σ·x³` at infinity, and is
//! real and positive on the real axis far to the right when `σ = +1`. This
//! is the sheet reached by analytic continuation from `y > 0` at a real
//! anchor to the right of all branch points (checked by
//! [`continue_branch`]); `σ = −1` is the other sheet.
//!
//! Contours are sequences of straight legs. A leg may start or end at a
//! branch point (the inverse square-root singularity is absorbed by the
//! substitution `x = p + (q − p)·sin²(θ/2)`), may run along a cut on a chosen
//! lip, or may run to infinity along a ray (`x = p + u·tan²(θ/2)`). Every leg
//! is integrated in `θ ∈ [0, π]` with adaptive Gauss–Kronrod (7/15).

use crate::hyperpoly::Linear;
use crate::scalar::{lit, Real};
use num_complex::Complex;
use thiserror::Error;

/// Default relative tolerance of the oracle.
pub const DEFAULT_TOL: f64 = 1e-11;
/// Minimum distance, relative to the root scale, between a leg and any
/// branch point that is not one of its endpoints.
pub const CLEARANCE: f64 = 1e-6;
const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("contour passes within {distance:.3e} of branch point {root}")]
    BranchPointProximity { root: usize, distance: f64 },
    #[error("adaptive quadrature did not converge (estimated error {error:.3e} after {intervals} intervals)")]
    NoConvergence { error: f64, intervals: usize },
    #[error("invalid contour: {0}")]
    InvalidContour(String),
}

// Kronrod 15-point nodes and weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

struct Panel<T> {
    lo: T,
    hi: T,
    value: Complex<T>,
    error: T,
}

fn gk15<T: Real, F: FnMut(T) -> Complex<T>>(f: &mut F, lo: T, hi: T) -> Panel<T> {
    let c = (lo + hi) / lit(2.0);
    let h = (hi - lo) / lit(2.0);
    let fc = f(c);
    let mut kron = fc * lit::<T>(WGK[7]);
    let mut gauss = fc * lit::<T>(WG[3]);
    for j in 0..7 {
        let dx = h * lit(XGK[j]);
        let pair = f(c - dx) + f(c + dx);
        kron += pair * lit::<T>(WGK[j]);
        if j % 2 == 1 {
            gauss += pair * lit::<T>(WG[j / 2]);
        }
    }
    let value = kron * h;
    let error = ((kron - gauss) * h).norm();
    Panel { lo, hi, value, error }
}

/// Adaptive Gauss–Kronrod integration of a complex-valued function of a real
/// variable, refined until the estimated absolute error is below
/// `tol · max(|I|, floor)` where `floor` guards integrals that vanish.
pub fn gauss_kronrod_complex<T, F>(mut f: F, lo: T, hi: T, tol: T) -> Result<Complex<T>, QuadError>
where
    T: Real,
    F: FnMut(T) -> Complex<T>,
{
    let mut panels = vec![gk15(&mut f, lo, hi)];
    // Scale for vanishing integrals: the integral of |f| on the first pass.
    let floor = {
        let mut g = |t: T| Complex::from(f(t).norm());
        gk15(&mut g, lo, hi).value.re
    };
    loop {
        let total: Complex<T> = panels.iter().fold(Complex::from(T::zero()), |s, p| s + p.value);
        let err: T = panels.iter().fold(T::zero(), |s, p| s + p.error);
        let target = tol * total.norm().max(floor * lit(1e-3)).max(T::min_positive_value());
        if err <= target {
            return Ok(total);
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(QuadError::NoConvergence { error: err.to_f64().unwrap_or(f64::NAN), intervals: panels.len() });
        }
        let (worst, _) =
            panels
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |(bi, be), (i, p)| if p.error > be { (i, p.error) } else { (bi, be) });
        let p = panels.swap_remove(worst);
        let mid = (p.lo + p.hi) / lit(2.0);
        if !(mid > p.lo && mid < p.hi) {
            return Err(QuadError::NoConvergence { error: err.to_f64().unwrap_or(f64::NAN), intervals: panels.len() });
        }
        panels.push(gk15(&mut f, p.lo, mid));
        panels.push(gk15(&mut f, mid, p.hi));
    }
}

/// Real-valued convenience wrapper around [`gauss_kronrod_complex`].
pub fn gauss_kronrod<T, F>(f: F, lo: T, hi: T, tol: T) -> Result<T, QuadError>
where
    T: Real,
    F: Fn(T) -> T,
{
    gauss_kronrod_complex(|t| Complex::from(f(t)), lo, hi, tol).map(|z| z.re)
}

/// Which side of a cut a leg runs along, relative to the direction of the
/// leg (so reversing a leg along the same lip swaps `Left` and `Right`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lip {
    Left,
    Right,
}

/// A branch of `y` fixed by three straight cuts (index pairs into `roots`).
#[derive(Debug, Clone, PartialEq)]
pub struct CutSheet<T> {
    pub roots: [Complex<T>; 6],
    pub cuts: [(usize, usize); 3],
    /// `+1` for the sheet with `y ~ +x³`, `−1` for the other.
    pub sign: T,
}

impl<T: Real> CutSheet<T> {
    pub fn new(roots: [Complex<T>; 6], cuts: [(usize, usize); 3]) -> Result<Self, QuadError> {
        let mut seen = [false; 6];
        for &(p, q) in &cuts {
            for k in [p, q] {
                if k >= 6 || seen[k] {
                    return Err(QuadError::InvalidContour(format!("cuts {cuts:?} do not pair the six roots")));
                }
                seen[k] = true;
            }
        }
        Ok(Self { roots, cuts, sign: T::one() })
    }

    /// The same cut structure on the other sheet.
    pub fn flipped(&self) -> Self {
        Self { sign: -self.sign, ..self.clone() }
    }

    pub fn scale(&self) -> T {
        self.roots.iter().fold(T::one(), |s, r| s.max(r.norm()))
    }

    /// `y(x)` at a point off the cuts.
    pub fn y(&self, x: Complex<T>) -> Complex<T> {
        let diffs = self.roots.map(|r| x - r);
        self.y_from_diffs(&diffs, None)
    }

    /// `y` from the differences `x − r_k` (supplied exactly near endpoints).
    /// With `lip = Some((j, side))` the point is on cut `j` and that factor is
    /// replaced by its boundary value divided by the vanishing profile
    /// `sin θ` (the caller multiplies it back in analytically).
    fn y_from_diffs(&self, d: &[Complex<T>; 6], lip: Option<(usize, Lip)>) -> Complex<T> {
        let two = lit::<T>(2.0);
        let mut y = Complex::from(self.sign);
        for (j, &(p, q)) in self.cuts.iter().enumerate() {
            let factor = match lip {
                Some((lj, side)) if lj == j => {
                    let h = (self.roots[q] - self.roots[p]) / two;
                    let i = Complex::new(T::zero(), T::one());
                    match side {
                        Lip::Left => i * h,
                        Lip::Right => -i * h,
                    }
                }
                _ => {
                    let xm = (d[p] + d[q]) / two;
                    xm * (d[p] * d[q] / (xm * xm)).sqrt()
                }
            };
            y *= factor;
        }
        y
    }

    fn cut_of(&self, a: usize, b: usize) -> Option<(usize, bool)> {
        self.cuts.iter().enumerate().find_map(|(j, &(p, q))| {
            if (p, q) == (a, b) {
                Some((j, true))
            } else if (p, q) == (b, a) {
                Some((j, false))
            } else {
                None
            }
        })
    }
}

/// One straight piece of a contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Leg<T> {
    /// Segment between two points; endpoints may be branch points (by index).
    /// Legs joining the two ends of a cut must say which lip they follow.
    Segment { from: Endpoint<T>, to: Endpoint<T>, lip: Option<Lip> },
    /// Ray from a point to infinity in direction `dir` (nonzero).
    ToInfinity { from: Endpoint<T>, dir: Complex<T> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint<T> {
    Root(usize),
    Point(Complex<T>),
}

impl<T: Real> Endpoint<T> {
    fn at(&self, sheet: &CutSheet<T>) -> Complex<T> {
        match *self {
            Endpoint::Root(k) => sheet.roots[k],
            Endpoint::Point(z) => z,
        }
    }

    fn root(&self) -> Option<usize> {
        match *self {
            Endpoint::Root(k) => Some(k),
            Endpoint::Point(_) => None,
        }
    }
}

/// A contour on a fixed sheet.
#[derive(Debug, Clone, PartialEq)]
pub struct SheetedContour<T> {
    pub sheet: CutSheet<T>,
    pub legs: Vec<Leg<T>>,
}

fn dist_to_segment<T: Real>(z: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let d = b - a;
    let n2 = d.norm_sqr();
    if n2 == T::zero() {
        return (z - a).norm();
    }
    let t = ((z - a) * d.conj()).re / n2;
    let t = t.max(T::zero()).min(T::one());
    (z - (a + d * t)).norm()
}

fn check_clearance<T: Real>(
    sheet: &CutSheet<T>,
    a: Complex<T>,
    b: Option<Complex<T>>,
    dir: Option<Complex<T>>,
    skip: [Option<usize>; 2],
) -> Result<(), QuadError> {
    let thr = lit::<T>(CLEARANCE) * sheet.scale();
    for (k, &r) in sheet.roots.iter().enumerate() {
        if skip.contains(&Some(k)) {
            continue;
        }
        let dist = match (b, dir) {
            (Some(b), _) => dist_to_segment(r, a, b),
            (None, Some(u)) => {
                let t = ((r - a) * u.conj()).re / u.norm_sqr();
                if t <= T::zero() {
                    (r - a).norm()
                } else {
                    (r - (a + u * t)).norm()
                }
            }
            _ => unreachable!(),
        };
        if dist < thr {
            return Err(QuadError::BranchPointProximity { root: k, distance: dist.to_f64().unwrap_or(0.0) });
        }
    }
    Ok(())
}

fn segment_integral<T: Real>(
    sheet: &CutSheet<T>,
    from: Endpoint<T>,
    to: Endpoint<T>,
    lip: Option<Lip>,
    s: &Linear<T>,
    tol: T,
) -> Result<Complex<T>, QuadError> {
    let (p, q) = (from.at(sheet), to.at(sheet));
    let d = q - p;
    if d.norm() == T::zero() {
        return Ok(Complex::from(T::zero()));
    }
    let (ri, rj) = (from.root(), to.root());
    check_clearance(sheet, p, Some(q), None, [ri, rj])?;
    let on_cut = match (ri, rj) {
        (Some(i), Some(j)) => sheet.cut_of(i, j),
        _ => None,
    };
    let lip_spec = match (on_cut, lip) {
        (Some((cut, forward)), Some(side)) => {
            // `side` is relative to the leg direction; convert to the cut's.
            let side = if forward {
                side
            } else if side == Lip::Left {
                Lip::Right
            } else {
                Lip::Left
            };
            Some((cut, side))
        }
        (Some(_), None) => {
            return Err(QuadError::InvalidContour("a leg along a cut needs a lip".into()));
        }
        (None, _) => None,
    };
    let half = lit::<T>(0.5);
    let f = |theta: T| {
        let sh = (theta * half).sin();
        let ch = (theta * half).cos();
        let (sv, cv) = (sh * sh, ch * ch);
        let x = p + d * sv;
        let mut diffs = sheet.roots.map(|r| x - r);
        if let Some(i) = ri {
            diffs[i] = d * sv;
        }
        if let Some(j) = rj {
            diffs[j] = -(d * cv);
        }
        let dxdt = d * (theta.sin() * half);
        match lip_spec {
            // The lip factor is `±i·h·sin θ`; its `sin θ` cancels against dx/dθ.
            Some(spec) => s.eval(x) * d * half / sheet.y_from_diffs(&diffs, Some(spec)),
            None => s.eval(x) * dxdt / sheet.y_from_diffs(&diffs, None),
        }
    };
    gauss_kronrod_complex(f, T::zero(), T::PI(), tol)
}

fn ray_integral<T: Real>(
    sheet: &CutSheet<T>,
    from: Endpoint<T>,
    dir: Complex<T>,
    s: &Linear<T>,
    tol: T,
) -> Result<Complex<T>, QuadError> {
    if dir.norm() == T::zero() {
        return Err(QuadError::InvalidContour("ray direction must be nonzero".into()));
    }
    let p = from.at(sheet);
    let ri = from.root();
    check_clearance(sheet, p, None, Some(dir), [ri, None])?;
    let u = dir / dir.norm();
    let half = lit::<T>(0.5);
    let f = |theta: T| {
        let ch = (theta * half).cos();
        if ch == T::zero() {
            return Complex::from(T::zero());
        }
        let sh = (theta * half).sin();
        let tau = (sh * sh) / (ch * ch);
        let x = p + u * tau;
        let mut diffs = sheet.roots.map(|r| x - r);
        if let Some(i) = ri {
            diffs[i] = u * tau;
        }
        let dxdt = u * (theta.sin() * half / (ch * ch * ch * ch));
        s.eval(x) * dxdt / sheet.y_from_diffs(&diffs, None)
    };
    gauss_kronrod_complex(f, T::zero(), T::PI(), tol)
}

/// `∫ S(x) dx / y` along the contour.
pub fn line_integral<T: Real>(c: &SheetedContour<T>, s: &Linear<T>, tol: T) -> Result<Complex<T>, QuadError> {
    let mut total = Complex::from(T::zero());
    for leg in &c.legs {
        total += match *leg {
            Leg::Segment { from, to, lip } => segment_integral(&c.sheet, from, to, lip, s, tol)?,
            Leg::ToInfinity { from, dir } => ray_integral(&c.sheet, from, dir, s, tol)?,
        };
    }
    Ok(total)
}

/// `∫_{∞ on this sheet}^{endpoint} S dx / y`, arriving along the ray from
/// infinity in direction `−dir`.
pub fn infinity_integral<T: Real>(
    sheet: &CutSheet<T>,
    s: &Linear<T>,
    endpoint: Endpoint<T>,
    dir: Complex<T>,
    tol: T,
) -> Result<Complex<T>, QuadError> {
    ray_integral(sheet, endpoint, dir, s, tol).map(|v| -v)
}

/// Integral between two points on a straight leg (shorthand).
pub fn segment<T: Real>(
    sheet: &CutSheet<T>,
    from: Endpoint<T>,
    to: Endpoint<T>,
    lip: Option<Lip>,
    s: &Linear<T>,
    tol: T,
) -> Result<Complex<T>, QuadError> {
    segment_integral(sheet, from, to, lip, s, tol)
}

/// Continues `y = √F` along a polyline from the value `y0` at its first
/// point, stepping finely and always picking the square root nearest to the
/// previous value. This is the sheet-tracking reference the cut
/// representation is checked against.
pub fn continue_branch<T: Real>(
    roots: &[Complex<T>; 6],
    path: &[Complex<T>],
    y0: Complex<T>,
    steps_per_leg: usize,
) -> Complex<T> {
    let f = |x: Complex<T>| roots.iter().fold(Complex::from(T::one()), |acc, r| acc * (x - *r));
    let mut y = y0;
    for w in path.windows(2) {
        for k in 1..=steps_per_leg {
            let t = lit::<T>(k as f64 / steps_per_leg as f64);
            let x = w[0] + (w[1] - w[0]) * t;
            let r = f(x).sqrt();
            y = if (r - y).norm() <= (r + y).norm() { r } else { -r };
        }
    }
    y
}
