//! Intersection of a straight line with a parametric plane curve.

use crate::error::{Error, Result};
use crate::numerics::roots::{find_root, Bracket};
use crate::scalar::{from_usize, lit, Real};

/// Samples used by the sign-change scan in [`intersect_line_curve`].
pub const DEFAULT_SCAN: usize = 512;

/// Point where a parametric curve crosses a line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing<T> {
    pub v: T,
    pub point: [T; 2],
}

/// Intersects the line through `a` and `b` with `curve(v)`, `v` in `range`.
///
/// The crossing must be unique: a sign-change scan of the signed distance to
/// the line rejects ranges with no or several crossings.
pub fn intersect_line_curve<T: Real>(
    a: [T; 2],
    b: [T; 2],
    curve: impl Fn(T) -> [T; 2],
    range: (T, T),
) -> Result<Crossing<T>> {
    intersect_line_curve_with(a, b, curve, range, DEFAULT_SCAN)
}

pub fn intersect_line_curve_with<T: Real>(
    a: [T; 2],
    b: [T; 2],
    curve: impl Fn(T) -> [T; 2],
    range: (T, T),
    scan: usize,
) -> Result<Crossing<T>> {
    let dir = [b[0] - a[0], b[1] - a[1]];
    let side = |v: T| {
        let c = curve(v);
        (c[0] - a[0]) * dir[1] - (c[1] - a[1]) * dir[0]
    };
    let scan = scan.max(2);
    let (lo, hi) = range;
    let step = (hi - lo) / from_usize(scan - 1);
    let samples: Vec<(T, T)> = (0..scan)
        .map(|i| {
            let v = if i + 1 == scan { hi } else { lo + step * from_usize(i) };
            (v, side(v))
        })
        .collect();
    let scale = samples.iter().map(|(_, s)| s.abs()).fold(T::zero(), T::max);
    let zero_tol = scale * lit(1e-13) + T::min_positive_value();

    // Each crossing is either a run of (numerically) zero samples or a strict
    // sign change between neighbouring nonzero samples.
    let mut found: Vec<(T, T)> = Vec::new();
    let mut i = 0;
    while i < samples.len() {
        let (v, s) = samples[i];
        if s.abs() <= zero_tol {
            let start = i;
            while i + 1 < samples.len() && samples[i + 1].1.abs() <= zero_tol {
                i += 1;
            }
            let mid = (start + i) / 2;
            found.push((samples[mid].0, samples[mid].0));
        } else if i + 1 < samples.len() {
            let (v2, s2) = samples[i + 1];
            if s2.abs() > zero_tol && s.signum() != s2.signum() {
                found.push((v, v2));
            }
        }
        i += 1;
    }
    match found.len() {
        0 => Err(Error::NoCrossing),
        1 => {
            let (l, h) = found[0];
            let v = if l == h {
                l
            } else {
                find_root(side, Bracket::new(l, h), T::epsilon() * scale)?
            };
            Ok(Crossing { v, point: curve(v) })
        }
        count => Err(Error::MultipleCrossings { count }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn circle(v: f64) -> [f64; 2] {
        [v.cos(), v.sin()]
    }

    #[test]
    fn line_crosses_arc_once() {
        let c = intersect_line_curve([0.0, 0.0], [1.0, 1.0], circle, (0.0, 1.5)).unwrap();
        assert_abs_diff_eq!(c.v, std::f64::consts::FRAC_PI_4, epsilon = 1e-12);
        assert_abs_diff_eq!(c.point[0], 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn crossing_counts_are_checked() {
        assert!(matches!(
            intersect_line_curve([0.0, 0.0], [1.0, 1.0], circle, (0.0, 0.5)),
            Err(Error::NoCrossing)
        ));
        assert!(matches!(
            intersect_line_curve([-2.0, 0.5], [2.0, 0.5], circle, (0.0, 3.0)),
            Err(Error::MultipleCrossings { count: 2 })
        ));
    }

    #[test]
    fn crossing_at_range_endpoint() {
        let c = intersect_line_curve([0.0, 0.0], [1.0, 0.0], circle, (0.0, 1.0)).unwrap();
        assert_eq!(c.v, 0.0);
    }
}
