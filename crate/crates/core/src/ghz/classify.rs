//! SLOCC classes of three-qubit GHZ-symmetric states.

use serde::{Deserialize, Serialize};

use super::ThreeQubitGhzPoint;
use crate::error::{Error, Result};
use crate::scalar::{lit, sqrt3, tol, to_f64, Real};

/// Slack applied when testing membership of a closed class region.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Entanglement class, ordered from weakest to strongest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntanglementClass {
    Separable,
    Biseparable,
    W,
    #[serde(rename = "GHZ")]
    Ghz,
}

impl EntanglementClass {
    pub fn name(self) -> &'static str {
        match self {
            EntanglementClass::Separable => "Separable",
            EntanglementClass::Biseparable => "Biseparable",
            EntanglementClass::W => "W",
            EntanglementClass::Ghz => "GHZ",
        }
    }
}

impl std::fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Right edge `1/8 + (sqrt3/2) q` of the triangle.
pub fn triangle_edge_p<T: Real>(q: T) -> T {
    lit::<T>(0.125) + sqrt3::<T>() * lit(0.5) * q
}

/// Separable/biseparable line `|p| = 1/8 - (sqrt3/6) q`.
pub fn separable_boundary_p<T: Real>(q: T) -> T {
    lit::<T>(0.125) - sqrt3::<T>() / lit(6.0) * q
}

/// Biseparable/W line `|p| = 3/8 - (sqrt3/2) q`.
pub fn bisep_w_boundary_p<T: Real>(q: T) -> T {
    lit::<T>(0.375) - sqrt3::<T>() * lit(0.5) * q
}

/// `q` range swept by the W/GHZ curve for `v` in `[0, 1]`: `[sqrt3/6, sqrt3/4]`.
pub const WGHZ_Q_RANGE: (f64, f64) = (0.288_675_134_594_812_9, 0.433_012_701_892_219_3);

/// Point of the W/GHZ boundary (positive-`p` branch):
/// `p = (v^5 + 8 v^3) / (8 (4 - v^2))`, `q = sqrt3 (4 - v^2 - v^4) / (4 (4 - v^2))`.
pub fn wghz_boundary<T: Real>(v: T) -> Result<ThreeQubitGhzPoint<T>> {
    if !(v >= T::zero() && v <= T::one()) {
        return Err(Error::OutOfDomain {
            name: "v",
            value: to_f64(v),
            domain: "[0, 1]",
        });
    }
    Ok(wghz_point(v))
}

pub(crate) fn wghz_point<T: Real>(v: T) -> ThreeQubitGhzPoint<T> {
    let v2 = v * v;
    let den = lit::<T>(4.0) - v2;
    ThreeQubitGhzPoint {
        p: (v2 * v2 * v + lit::<T>(8.0) * v2 * v) / (lit::<T>(8.0) * den),
        q: sqrt3::<T>() * (lit::<T>(4.0) - v2 - v2 * v2) / (lit::<T>(4.0) * den),
    }
}

/// Curve parameter `v` of the W/GHZ boundary point at height `q`.
///
/// With `r = 1 - 4q/sqrt3`, the curve satisfies `v^4 = r (4 - v^2)`, so
/// `v^2 = (sqrt(r^2 + 16 r) - r) / 2`. Returns `None` outside the curve's `q` range.
pub fn wghz_parameter_of_q<T: Real>(q: T) -> Option<T> {
    let r = T::one() - lit::<T>(4.0) * q / sqrt3();
    let slack = tol::<T>(BOUNDARY_TOL);
    if r < -slack {
        return None;
    }
    let r = r.max(T::zero());
    let v2 = ((r * r + lit::<T>(16.0) * r).sqrt() - r) * lit(0.5);
    if v2 > T::one() + slack {
        return None;
    }
    Some(v2.min(T::one()).sqrt())
}

/// Largest `|p|` of the W class at height `q`; below the curve's `q` range
/// the W region reaches the triangle edge.
pub fn wghz_boundary_p<T: Real>(q: T) -> T {
    match wghz_parameter_of_q(q) {
        Some(v) => wghz_point(v).p,
        None if q < sqrt3::<T>() / lit(4.0) => triangle_edge_p(q),
        None => T::zero(),
    }
}

/// SLOCC class of a GHZ-symmetric state; boundary points belong to the lower class.
pub fn classify<T: Real>(pt: &ThreeQubitGhzPoint<T>) -> EntanglementClass {
    let p = pt.p.abs();
    let slack = tol::<T>(BOUNDARY_TOL);
    if p <= separable_boundary_p(pt.q) + slack {
        EntanglementClass::Separable
    } else if p <= bisep_w_boundary_p(pt.q) + slack {
        EntanglementClass::Biseparable
    } else if p <= wghz_boundary_p(pt.q) + slack {
        EntanglementClass::W
    } else {
        EntanglementClass::Ghz
    }
}
