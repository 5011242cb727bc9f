//! Optimal local-hidden-state model for Bell-diagonal states.
//!
//! For a correlation matrix `T0` the hidden variable is a unit vector
//! `lambda` with density `omega = |T0 lambda| / (2 pi)`, Alice answers
//! deterministically with `sgn(x . lambda)`, and Bob holds the pure state
//! with Bloch vector `T0 lambda / |T0 lambda|`. The model reproduces the
//! conditional states `(I + a (T0 x) . sigma) / 4` exactly when
//! `int |T0 lambda| d lambda = 2 pi`, which traces the steering boundary.
//! On the GHZ-symmetric slice `T0 = 2p Diag[1, -1, w]` this boundary reads
//! `1 / (2p) = |w| + arccosh|w| / sqrt(w^2 - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ghz::{CorrelationMatrix, TwoQubitGhzPoint};
use crate::linalg::{kron, projector_unchecked, BlochVector, DensityOperator, Matrix, Outcome};
use crate::numerics::{find_root, sphere_integrate, Bracket, SphereGrid, SphereRule, SplitSphereQuadrature};
use crate::scalar::{lit, sgn, sqrt2, tol, to_f64, Real};

/// Largest accepted `|int |T0 lambda| d lambda - 2 pi|` for a boundary matrix.
pub const BOUNDARY_TOL: f64 = 1e-7;

/// Half-width of the window around `|w| = 1` where the series is used.
const SERIES_WINDOW: f64 = 1e-2;

/// `arccosh(w) / sqrt(w^2 - 1)` for `w > 1`, continued analytically by
/// `arccos(w) / sqrt(1 - w^2)` for `0 <= w < 1`; even in `w`.
pub fn arccosh_ratio<T: Real>(w: T) -> T {
    asinh_ratio(w * w - T::one())
}

/// `asinh(sqrt e) / sqrt e` as an analytic function of `e`: equal to
/// `asin(sqrt(-e)) / sqrt(-e)` for `e < 0`, and summed as a Taylor series
/// near `e = 0` where both forms cancel catastrophically.
pub(crate) fn asinh_ratio<T: Real>(e: T) -> T {
    if e.abs() < lit(SERIES_WINDOW) {
        // sum_n (-1)^n (2n)! / (4^n (n!)^2 (2n+1)) e^n
        let mut coeff = T::one();
        let mut power = T::one();
        let mut sum = T::one();
        for n in 1..12 {
            let nf = lit::<T>(n as f64);
            coeff = -coeff * (lit::<T>(2.0) * nf - T::one()) / (lit::<T>(2.0) * nf);
            power *= e;
            sum += coeff * power / (lit::<T>(2.0) * nf + T::one());
        }
        sum
    } else if e > T::zero() {
        let a = e.sqrt();
        a.asinh() / a
    } else {
        let a = (-e).sqrt();
        a.min(T::one()).asin() / a
    }
}

/// `g(w) = |w| + arccosh|w| / sqrt(w^2 - 1)`; the boundary is `1/(2p) = g(w)`.
pub fn boundary_function<T: Real>(w: T) -> T {
    w.abs() + arccosh_ratio(w)
}

/// Point of the two-qubit steering boundary with slope `w = sqrt2 q / p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteeringBoundaryPoint<T> {
    pub w: T,
    pub p: T,
    pub q: T,
}

impl<T: Real> SteeringBoundaryPoint<T> {
    pub fn two_qubit_point(&self) -> TwoQubitGhzPoint<T> {
        TwoQubitGhzPoint { p: self.p, q: self.q }
    }

    /// `T0 = Diag[2p, -2p, 2 sqrt2 q]`.
    pub fn correlations(&self) -> CorrelationMatrix<T> {
        self.two_qubit_point().correlations()
    }
}

/// Solves `1 / (2p) = g(w)` for `p > 0`; `q = w p / sqrt2`.
pub fn boundary_p_of_w<T: Real>(w: T) -> Result<SteeringBoundaryPoint<T>> {
    if w == T::zero() || !w.is_finite() {
        return Err(Error::OutOfDomain {
            name: "w",
            value: to_f64(w),
            domain: "w != 0",
        });
    }
    let p = T::one() / (lit::<T>(2.0) * boundary_function(w));
    Ok(SteeringBoundaryPoint { w, p, q: w * p / sqrt2() })
}

/// Slope `w_c` at which the boundary curve meets the triangle side
/// `q/sqrt2 - p + 1/4 = 0`, i.e. the root of `g(w) = 2 - w`.
pub fn critical_slope<T: Real>() -> T {
    find_root(
        |w: T| boundary_function(w) + w - lit(2.0),
        Bracket::new(lit(0.05), T::one()),
        T::epsilon(),
    )
    .expect("g(w) + w - 2 changes sign on [0.05, 1]")
}

/// `int |T lambda| d lambda` on the product grid.
pub fn normalization_integral<T: Real>(t: &CorrelationMatrix<T>, grid: &SphereGrid<T>) -> Result<T> {
    sphere_integrate(grid, |l| t.apply(l).norm())
}

/// Same integral with the split rule (the cut plays no role here).
pub fn normalization_integral_split<T: Real>(t: &CorrelationMatrix<T>, quad: &SplitSphereQuadrature<T>) -> T {
    let z = BlochVector::ez();
    quad.integrate(&z, &z, &[], |l, _| t.apply(l).norm())
        .unwrap_or_else(T::zero)
}

/// `(omega(lambda), rho_lambda)` with `omega = |T lambda| / 2 pi` and
/// `rho_lambda = (I + lambda' . sigma) / 2`, `lambda' = T lambda / |T lambda|`.
pub fn lhs_components<T: Real>(
    t: &CorrelationMatrix<T>,
    lambda: &BlochVector<T>,
) -> Result<(T, DensityOperator<T>)> {
    lambda.ensure_unit()?;
    let (omega, bloch) = hidden_bloch(t, lambda).ok_or(Error::DegenerateDirection)?;
    let mut m = bloch.dot_sigma();
    m.add_scaled(T::one(), &Matrix::identity(2));
    Ok((omega, DensityOperator::new(m.scale(lit(0.5)))?))
}

/// `(|T lambda| / 2 pi, T lambda / |T lambda|)`, or `None` when `T lambda = 0`.
#[inline]
pub(crate) fn hidden_bloch<T: Real>(t: &CorrelationMatrix<T>, lambda: &BlochVector<T>) -> Option<(T, BlochVector<T>)> {
    let tl = t.apply(lambda);
    let n = tl.norm();
    (n > T::zero()).then(|| (n / T::TAU(), tl.scaled(T::one() / n)))
}

/// Deterministic response `(1 + a sgn(x . lambda)) / 2`, with `sgn(0) = +1`.
pub fn response_a<T: Real>(a: Outcome, x: &BlochVector<T>, lambda: &BlochVector<T>) -> T {
    (T::one() + a.sign::<T>() * sgn(x.dot(lambda))) * lit(0.5)
}

/// `Tr(Pi_b^y rho_lambda) = (1 + b y . lambda') / 2`.
#[inline]
pub(crate) fn response_b<T: Real>(b: Outcome, y: &BlochVector<T>, bloch: &BlochVector<T>) -> T {
    (T::one() + b.sign::<T>() * y.dot(bloch)) * lit(0.5)
}

/// The LHS model of a boundary correlation matrix.
#[derive(Clone, Debug)]
pub struct LhsModel<T> {
    t: CorrelationMatrix<T>,
}

impl<T: Real> LhsModel<T> {
    /// Accepts `t` only if `int |t lambda| d lambda = 2 pi` within [`BOUNDARY_TOL`].
    pub fn new(t: CorrelationMatrix<T>, quad: &SplitSphereQuadrature<T>) -> Result<Self> {
        let residual = normalization_integral_split(&t, quad) - T::TAU();
        if residual.abs() > tol::<T>(BOUNDARY_TOL) {
            return Err(Error::OffBoundary {
                residual: to_f64(residual),
            });
        }
        Ok(Self { t })
    }

    /// No boundary check; the model is then generally not normalized.
    pub fn unchecked(t: CorrelationMatrix<T>) -> Self {
        Self { t }
    }

    pub fn correlations(&self) -> &CorrelationMatrix<T> {
        &self.t
    }

    /// `int omega P_A(a|x, lambda) rho_lambda d lambda` for `a = +1, -1`.
    pub fn assemblage(&self, x: &BlochVector<T>, quad: &impl SphereRule<T>) -> [Matrix<T>; 2] {
        let mut acc = [[T::zero(); 4]; 2];
        quad.visit(x, x, &[], |lambda, w, side| {
            if let Some((omega, bloch)) = hidden_bloch(&self.t, lambda) {
                let slot = &mut acc[side.index()];
                let ww = w * omega;
                slot[0] += ww;
                slot[1] += ww * bloch.x;
                slot[2] += ww * bloch.y;
                slot[3] += ww * bloch.z;
            }
        });
        acc.map(|[n, bx, by, bz]| {
            let mut m = BlochVector::new(bx, by, bz).dot_sigma();
            m.add_scaled(n, &Matrix::identity(2));
            m.scale(lit(0.5))
        })
    }

    /// Joint distribution `int omega P_A(a|x) P_B(b|y) d lambda`, indexed `[a][b]`.
    pub fn joint(&self, x: &BlochVector<T>, y: &BlochVector<T>, quad: &impl SphereRule<T>) -> [[T; 2]; 2] {
        let mut out = [[T::zero(); 2]; 2];
        quad.visit(x, x, &[], |lambda, w, side| {
            if let Some((omega, bloch)) = hidden_bloch(&self.t, lambda) {
                for b in Outcome::ALL {
                    out[side.index()][b.index()] += w * omega * response_b(b, y, &bloch);
                }
            }
        });
        out
    }
}

/// `(I + a (T0 x) . sigma) / 4`, the conditional state of Bob.
pub fn conditional_state<T: Real>(t: &CorrelationMatrix<T>, x: &BlochVector<T>, a: Outcome) -> Matrix<T> {
    let mut m = t.apply(x).scaled(a.sign()).dot_sigma();
    m.add_scaled(T::one(), &Matrix::identity(2));
    m.scale(lit(0.25))
}

/// Largest Frobenius distance, over `a`, between the model assemblage and
/// the conditional states of the Bell-diagonal state.
pub fn verify_lhs<T: Real>(t0: &CorrelationMatrix<T>, x: &BlochVector<T>, quad: &SplitSphereQuadrature<T>) -> T {
    let sigma = LhsModel::unchecked(*t0).assemblage(x, quad);
    assemblage_deviation(t0, x, &sigma)
}

fn assemblage_deviation<T: Real>(t0: &CorrelationMatrix<T>, x: &BlochVector<T>, sigma: &[Matrix<T>; 2]) -> T {
    Outcome::ALL
        .iter()
        .map(|&a| (&sigma[a.index()] - &conditional_state(t0, x, a)).frobenius_norm())
        .fold(T::zero(), T::max)
}

/// [`verify_lhs`] evaluated on the plain product grid, with `sgn(0) = +1`.
pub fn verify_lhs_on_grid<T: Real>(t0: &CorrelationMatrix<T>, x: &BlochVector<T>, grid: &SphereGrid<T>) -> T {
    let sigma = assemblage_from_nodes(t0, x, grid.nodes().iter().copied());
    assemblage_deviation(t0, x, &sigma)
}

/// [`verify_lhs`] with a Monte Carlo estimate over uniform `samples`.
pub fn verify_lhs_mc<T: Real>(t0: &CorrelationMatrix<T>, x: &BlochVector<T>, samples: &[BlochVector<T>]) -> T {
    let w = lit::<T>(4.0) * T::PI() / lit(samples.len().max(1) as f64);
    let sigma = assemblage_from_nodes(t0, x, samples.iter().map(|l| (*l, w)));
    assemblage_deviation(t0, x, &sigma)
}

fn assemblage_from_nodes<T: Real>(
    t0: &CorrelationMatrix<T>,
    x: &BlochVector<T>,
    nodes: impl Iterator<Item = (BlochVector<T>, T)>,
) -> [Matrix<T>; 2] {
    let mut sigma = [Matrix::zeros(2), Matrix::zeros(2)];
    for (lambda, w) in nodes {
        if let Ok((omega, rho)) = lhs_components(t0, &lambda) {
            for a in Outcome::ALL {
                let pa = response_a(a, x, &lambda);
                if pa > T::zero() {
                    sigma[a.index()].add_scaled(w * omega * pa, rho.matrix());
                }
            }
        }
    }
    sigma
}

/// Model probability `P(a, b | x, y)` of the two-qubit LHV model.
pub fn two_qubit_lhv_joint<T: Real>(
    t0: &CorrelationMatrix<T>,
    x: &BlochVector<T>,
    y: &BlochVector<T>,
    a: Outcome,
    b: Outcome,
    quad: &SplitSphereQuadrature<T>,
) -> Result<T> {
    x.ensure_unit()?;
    y.ensure_unit()?;
    let model = LhsModel::new(*t0, quad)?;
    Ok(model.joint(x, y, quad)[a.index()][b.index()])
}

/// Quantum prediction `Tr(Pi_a^x (x) Pi_b^y rho^B(T0))`.
pub fn two_qubit_quantum_joint<T: Real>(
    t0: &CorrelationMatrix<T>,
    x: &BlochVector<T>,
    y: &BlochVector<T>,
    a: Outcome,
    b: Outcome,
) -> T {
    let effect = kron(&projector_unchecked(x, a), &projector_unchecked(y, b));
    t0.bell_diagonal_operator().trace_product_re(&effect)
}
