//! Bracketed scalar root finding.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Interval `[lo, hi]` expected to contain a sign change.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Bracket<T> {
    pub fn new(lo: T, hi: T) -> Self {
        if lo <= hi {
            Self { lo, hi }
        } else {
            Self { lo: hi, hi: lo }
        }
    }
}

const MAX_ITER: usize = 200;

/// Brent's method with a bisection fallback.
///
/// Returns `x` with `|f(x)| <= tol` or a final bracket narrower than `tol`.
pub fn find_root<T: Real>(mut f: impl FnMut(T) -> T, bracket: Bracket<T>, tol: T) -> Result<T> {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange {
            lo: to_f64(a),
            hi: to_f64(b),
        });
    }
    let two = lit::<T>(2.0);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + tol * lit(0.5);
        let xm = (c - b) * lit(0.5);
        if fb.abs() <= tol || xm.abs() <= tol1 || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation, or secant when only two points are distinct.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = lit::<T>(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 { b + d } else { b + tol1 * xm.signum() };
        fb = f(b);
    }
    Ok(b)
}

/// Plain bisection; slower than [`find_root`] but needs nothing beyond continuity.
pub fn bisect<T: Real>(mut f: impl FnMut(T) -> T, bracket: Bracket<T>, tol: T) -> Result<T> {
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange {
            lo: to_f64(lo),
            hi: to_f64(hi),
        });
    }
    for _ in 0..MAX_ITER {
        let mid = (lo + hi) * lit(0.5);
        let fmid = f(mid);
        if fmid.abs() <= tol || hi - lo <= tol {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * lit(0.5))
}
