//! Entanglement measures in closed form on the three-qubit triangle.

use serde::{Deserialize, Serialize};

use super::classify::{classify, wghz_point, EntanglementClass};
use super::ThreeQubitGhzPoint;
use crate::error::Result;
use crate::numerics::intersect_line_curve;
use crate::scalar::{lit, sqrt3, Real};

/// Total (`c_t`) and genuinely multipartite (`c_g`) concurrence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Concurrences<T> {
    pub c_t: T,
    pub c_g: T,
}

/// `C_T = max{0, 2|p| + (sqrt3/3) q - 1/4}`, `C_G = max{0, 2|p| + sqrt3 q - 3/4}`.
pub fn concurrences<T: Real>(pt: &ThreeQubitGhzPoint<T>) -> Concurrences<T> {
    let two_p = lit::<T>(2.0) * pt.p.abs();
    let r3 = sqrt3::<T>();
    Concurrences {
        c_t: (two_p + r3 / lit(3.0) * pt.q - lit(0.25)).max(T::zero()),
        c_g: (two_p + r3 * pt.q - lit(0.75)).max(T::zero()),
    }
}

/// Three-tangle `max{0, (p - p_W) / (1/2 - p_W)}`, where `p_W` is where the
/// line from the `|G+>` corner through `(|p|, q)` meets the W/GHZ boundary.
pub fn three_tangle<T: Real>(pt: &ThreeQubitGhzPoint<T>) -> Result<T> {
    let pt = ThreeQubitGhzPoint { p: pt.p.abs(), q: pt.q };
    if classify(&pt) <= EntanglementClass::W {
        return Ok(T::zero());
    }
    let corner = ThreeQubitGhzPoint::<T>::ghz_plus();
    let gap = (corner.p - pt.p).hypot(corner.q - pt.q);
    if gap <= T::epsilon() {
        return Ok(T::one());
    }
    let crossing = intersect_line_curve(
        [corner.p, corner.q],
        [pt.p, pt.q],
        |v| {
            let b = wghz_point(v);
            [b.p, b.q]
        },
        (T::zero(), T::one()),
    )?;
    let p_w = crossing.point[0];
    let tau = (pt.p - p_w) / (corner.p - p_w);
    Ok(tau.max(T::zero()).min(T::one()))
}
