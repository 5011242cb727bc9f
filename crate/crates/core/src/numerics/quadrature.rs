//! Deterministic quadrature on the unit sphere.
//!
//! Two rules are provided:
//!
//! * [`SphereGrid`]: Gauss-Legendre in `cos(theta)` times a uniform trapezoid
//!   rule in `phi`. Exact for polynomials in `(x, y, z)` of total degree below
//!   the order, antipodally symmetric, and the reference rule for smooth
//!   integrands.
//! * [`SplitSphereQuadrature`]: Gauss-Legendre in `theta` about an arbitrary
//!   polar axis, with every latitude ring cut where it crosses the great
//!   circle `cut . lambda = 0`. Integrands carrying a factor
//!   `sgn(cut . lambda)` are smooth on every piece, so the rule converges
//!   spectrally instead of at the first-order rate a product grid gets across
//!   a jump.

use std::ops::AddAssign;

use crate::error::{Error, Result};
use crate::linalg::{BlochVector, Matrix, Outcome};
use crate::scalar::{from_usize, lit, Real};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Rule with `n` nodes; the nodes are computed in `f64` by Newton
    /// iteration on the Legendre recurrence and then converted.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (1.0f64, 0.0f64);
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
                }
                dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
                let z1 = z;
                z = z1 - p1 / dp;
                if (z - z1).abs() <= 1e-16 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(Self {
            nodes: nodes.into_iter().map(lit).collect(),
            weights: weights.into_iter().map(lit).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(node, weight)` pairs mapped onto `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * lit(0.5);
        let mid = (a + b) * lit(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Values that can be integrated: scalars, matrices and fixed arrays.
pub trait Integrand<T: Real>: Clone {
    /// `self += w * v`.
    fn add_weighted(&mut self, w: T, v: &Self);
    fn scaled(&self, w: T) -> Self;
}

impl<T: Real> Integrand<T> for T {
    fn add_weighted(&mut self, w: T, v: &Self) {
        *self += w * *v;
    }
    fn scaled(&self, w: T) -> Self {
        *self * w
    }
}

impl<T: Real> Integrand<T> for Matrix<T> {
    fn add_weighted(&mut self, w: T, v: &Self) {
        self.add_scaled(w, v);
    }
    fn scaled(&self, w: T) -> Self {
        self.scale(w)
    }
}

impl<T: Real + AddAssign, const N: usize> Integrand<T> for [T; N] {
    fn add_weighted(&mut self, w: T, v: &Self) {
        for (a, b) in self.iter_mut().zip(v) {
            *a += w * *b;
        }
    }
    fn scaled(&self, w: T) -> Self {
        let mut out = *self;
        for a in out.iter_mut() {
            *a *= w;
        }
        out
    }
}

/// Product rule on the unit sphere: Gauss-Legendre in `cos(theta)` with
/// `order` nodes times `2 * order` uniformly spaced azimuths.
#[derive(Clone, Debug)]
pub struct SphereGrid<T> {
    order: usize,
    nodes: Vec<(BlochVector<T>, T)>,
}

impl<T: Real> SphereGrid<T> {
    pub fn new(order: usize) -> Result<Self> {
        let gl = GaussLegendre::<T>::new(order)?;
        let n_phi = 2 * order;
        let dphi = T::TAU() / from_usize(n_phi);
        let mut nodes = Vec::with_capacity(order * n_phi);
        for (u, wu) in gl.mapped(-T::one(), T::one()) {
            let s = (T::one() - u * u).max(T::zero()).sqrt();
            for k in 0..n_phi {
                let phi = dphi * from_usize(k);
                let lambda = BlochVector::new(s * phi.cos(), s * phi.sin(), u);
                nodes.push((lambda, wu * dphi));
            }
        }
        Ok(Self { order, nodes })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[(BlochVector<T>, T)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum of the weights (`4 pi` up to rounding).
    pub fn total_weight(&self) -> T {
        self.nodes.iter().map(|(_, w)| *w).sum()
    }
}

/// Quadrature estimate of `int f(lambda) d lambda` over the unit sphere.
///
/// Nodes are visited in a fixed order, so the result is bitwise reproducible.
pub fn sphere_integrate<T: Real, V: Integrand<T>>(
    grid: &SphereGrid<T>,
    mut f: impl FnMut(&BlochVector<T>) -> V,
) -> Result<V> {
    let mut nodes = grid.nodes.iter();
    let (first, w0) = nodes.next().ok_or(Error::EmptyGrid)?;
    let mut acc = f(first).scaled(*w0);
    for (lambda, w) in nodes {
        acc.add_weighted(*w, &f(lambda));
    }
    Ok(acc)
}

/// Quadrature that resolves the hemisphere cut `cut . lambda = 0` exactly.
#[derive(Clone, Debug)]
pub struct SplitSphereQuadrature<T> {
    order: usize,
    gl: GaussLegendre<T>,
}

/// Breakpoints closer than this (in radians) are merged.
const BREAK_MERGE: f64 = 1e-12;

impl<T: Real> SplitSphereQuadrature<T> {
    pub fn new(order: usize) -> Result<Self> {
        Ok(Self {
            order,
            gl: GaussLegendre::new(order)?,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Visits `(lambda, weight, side)` for every node, where `side` is the
    /// sign of `cut . lambda` on the piece containing the node.
    ///
    /// Latitude rings are taken about `polar`; `theta_breaks` lists extra
    /// polar angles (in `(0, pi)`) at which the integrand has a kink or jump
    /// along a whole ring. Both axes must be unit vectors.
    pub fn visit(
        &self,
        polar: &BlochVector<T>,
        cut: &BlochVector<T>,
        theta_breaks: &[T],
        mut f: impl FnMut(&BlochVector<T>, T, Outcome),
    ) {
        let (e1, e2) = orthonormal_complement(polar);
        let c1 = cut.dot(&e1);
        let c2 = cut.dot(&e2);
        let c3 = cut.dot(polar);
        let rho_c = (c1 * c1 + c2 * c2).sqrt();
        let psi = c2.atan2(c1);
        let pi = T::PI();

        let tangent = c3.abs().atan2(rho_c);
        let mut breaks = vec![T::zero(), pi, tangent, pi - tangent];
        breaks.extend(theta_breaks.iter().copied().filter(|t| *t > T::zero() && *t < pi));
        breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        breaks.dedup_by(|a, b| (*a - *b).abs() < lit(BREAK_MERGE));

        let n_ring = 2 * self.order;
        let dphi_ring = T::TAU() / from_usize(n_ring);
        let point = |theta_sin: T, theta_cos: T, phi: T| {
            let (s, c) = phi.sin_cos();
            BlochVector::new(
                theta_sin * c * e1.x + theta_sin * s * e2.x + theta_cos * polar.x,
                theta_sin * c * e1.y + theta_sin * s * e2.y + theta_cos * polar.y,
                theta_sin * c * e1.z + theta_sin * s * e2.z + theta_cos * polar.z,
            )
        };

        for seg in breaks.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            if b - a < lit(BREAK_MERGE) {
                continue;
            }
            // theta = mid - half cos(t) clusters nodes at both ends and turns
            // the square-root behaviour at tangent latitudes into a smooth one.
            let (mid, half) = ((a + b) * lit(0.5), (b - a) * lit(0.5));
            for (t, wu) in self.gl.mapped(T::zero(), pi) {
                let (sin_t, cos_t) = t.sin_cos();
                let theta = mid - half * cos_t;
                let wt = wu * half * sin_t;
                let (st, ct) = theta.sin_cos();
                let ring_weight = wt * st;
                let offset = ct * c3;
                let crossing = if rho_c * st > T::zero() {
                    let kappa = -offset / (rho_c * st);
                    (kappa.abs() < T::one()).then(|| kappa.acos())
                } else {
                    None
                };
                match crossing {
                    None => {
                        // Whole ring on one side; pick it from the ring centre.
                        let side = if offset >= T::zero() { Outcome::Plus } else { Outcome::Minus };
                        for k in 0..n_ring {
                            let phi = dphi_ring * from_usize(k);
                            f(&point(st, ct, phi), ring_weight * dphi_ring, side);
                        }
                    }
                    Some(delta) => {
                        // cut . lambda > 0 for |phi - psi| < delta.
                        for (lo, hi, side) in [
                            (psi - delta, psi + delta, Outcome::Plus),
                            (psi + delta, psi + T::TAU() - delta, Outcome::Minus),
                        ] {
                            for (phi, wp) in self.gl.mapped(lo, hi) {
                                f(&point(st, ct, phi), ring_weight * wp, side);
                            }
                        }
                    }
                }
            }
        }
    }

    /// `int f(lambda, side) d lambda` with the cut resolved; see [`Self::visit`].
    pub fn integrate<V: Integrand<T>>(
        &self,
        polar: &BlochVector<T>,
        cut: &BlochVector<T>,
        theta_breaks: &[T],
        mut f: impl FnMut(&BlochVector<T>, Outcome) -> V,
    ) -> Option<V> {
        let mut acc: Option<V> = None;
        self.visit(polar, cut, theta_breaks, |lambda, w, side| {
            let v = f(lambda, side);
            match acc.as_mut() {
                Some(a) => a.add_weighted(w, &v),
                None => acc = Some(v.scaled(w)),
            }
        });
        acc
    }
}

/// Any rule for `int f(lambda, side) d lambda` over hidden directions that
/// reports on which side of a cut each node lies.
pub trait SphereRule<T: Real> {
    /// Visits `(lambda, weight, side)`; see [`SplitSphereQuadrature::visit`].
    fn visit(&self, polar: &BlochVector<T>, cut: &BlochVector<T>, theta_breaks: &[T], f: impl FnMut(&BlochVector<T>, T, Outcome));

    /// Short human-readable description.
    fn describe(&self) -> String;
}

impl<T: Real> SphereRule<T> for SplitSphereQuadrature<T> {
    fn visit(&self, polar: &BlochVector<T>, cut: &BlochVector<T>, theta_breaks: &[T], f: impl FnMut(&BlochVector<T>, T, Outcome)) {
        SplitSphereQuadrature::visit(self, polar, cut, theta_breaks, f)
    }

    fn describe(&self) -> String {
        format!("split Gauss-Legendre, order {}", self.order)
    }
}

/// Two unit vectors completing `n` to a right-handed orthonormal frame.
pub fn orthonormal_complement<T: Real>(n: &BlochVector<T>) -> (BlochVector<T>, BlochVector<T>) {
    let helper = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        BlochVector::ex()
    } else if n.y.abs() <= n.z.abs() {
        BlochVector::ey()
    } else {
        BlochVector::ez()
    };
    let e1 = helper
        .cross(n)
        .normalized()
        .expect("helper axis is not parallel to n");
    let e2 = n.cross(&e1);
    (e1, e2)
}
