//! Fully local model for `rho2(t, T, D01)`.
//!
//! The hidden variable is again a unit vector `lambda`, now with density
//! `omega = |T1 lambda| (1 + chi) / 2 pi` and hidden states
//! `rho^BC = [(Sigma0 + lambda'' . Sigma) / 2 + chi D01] / (1 + chi)`, where
//! `lambda'' = T1 lambda / |T1 lambda|` and `chi = min(sin theta'', c)`,
//! `c = 1 - w_c`. For `T1 = s Diag[1, -1, v]` the weight depends on `lambda`
//! only through `u = lambda_z`, and the two branches meet at `|u| = u_c`.

use serde::{Deserialize, Serialize};

use super::{joint_from_assemblage, odd_parity_operators, permutation_average_by, GeneralizedPauli, Joint3, PERMUTATIONS};
use crate::error::{Error, Result};
use crate::ghz::{CorrelationMatrix, ThreeQubitGhzPoint};
use crate::linalg::{kron, paulis, BlochVector, DensityOperator, Matrix, Outcome};
use crate::numerics::{GaussLegendre, SphereRule, SplitSphereQuadrature};
use crate::scalar::{lit, sqrt3, tol, to_f64, Real};
use crate::steering::{asinh_ratio, critical_slope};

/// Largest accepted residual of the two normalization relations.
pub const RELATION_TOL: f64 = 1e-6;

/// Residual beyond which a parameter set is rejected by the model.
pub const INCONSISTENT_TOL: f64 = 1e-5;

/// Diagonal state `w01 |01><01| + w10 |10><10|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalD01<T> {
    pub w01: T,
    pub w10: T,
}

impl<T: Real> DiagonalD01<T> {
    pub fn new(w01: T, w10: T) -> Result<Self> {
        let slack = tol::<T>(1e-12);
        if w01 < -slack || w10 < -slack {
            return Err(Error::NotPositive {
                min_eigenvalue: to_f64(w01.min(w10)),
            });
        }
        if (w01 + w10 - T::one()).abs() > slack {
            return Err(Error::TraceNotUnit { trace: to_f64(w01 + w10) });
        }
        Ok(Self { w01, w10 })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            w01: lit(0.5),
            w10: lit(0.5),
        }
    }

    pub fn matrix(&self) -> Matrix<T> {
        let z = T::zero();
        Matrix::from_real_diagonal(&[z, self.w01, self.w10, z])
    }
}

/// `rho2 = [t I (x) Sigma0 + (T sigma) . Sigma] / 4 + (1 - t) I (x) D01 / 2`.
pub fn rho2<T: Real>(t: T, corr: &CorrelationMatrix<T>, d01: &DiagonalD01<T>) -> Result<DensityOperator<T>> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::OutOfDomain {
            name: "t",
            value: to_f64(t),
            domain: "[0, 1]",
        });
    }
    let g = GeneralizedPauli::new();
    let id = Matrix::identity(2);
    let mut m = kron(&id, &g.sigma0).scale(t);
    for ((tk, sk), gk) in corr.diagonal().into_iter().zip(&paulis()).zip(g.vector()) {
        m.add_scaled(tk, &kron(sk, gk));
    }
    let mut m = m.scale(lit(0.25));
    m.add_scaled((T::one() - t) * lit(0.5), &kron(&id, &d01.matrix()));
    DensityOperator::physical(m)
}

/// Which choice the weight `chi = min(sin theta'', c)` makes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `chi = sin theta'' <= c`; the hidden state is separable.
    Separable,
    /// `chi = c < sin theta''`; the hidden state is filter-equivalent to
    /// the two-qubit steering-boundary state at `w_c`.
    Unsteerable,
}

/// Direction-dependent pieces of the model at one `lambda`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct HiddenPoint<T> {
    /// `|T1 lambda|`
    pub norm: T,
    /// `lambda''`
    pub dir: BlochVector<T>,
    pub chi: T,
    pub branch: Branch,
}

impl<T: Real> HiddenPoint<T> {
    pub fn new(corr: &CorrelationMatrix<T>, c: T, lambda: &BlochVector<T>) -> Option<Self> {
        let tl = corr.apply(lambda);
        let norm = tl.norm();
        if !(norm > T::zero()) {
            return None;
        }
        let dir = tl.scaled(T::one() / norm);
        let sin_theta = (dir.x * dir.x + dir.y * dir.y).sqrt();
        let (chi, branch) = if sin_theta <= c {
            (sin_theta, Branch::Separable)
        } else {
            (c, Branch::Unsteerable)
        };
        Some(Self { norm, dir, chi, branch })
    }

    /// Polar and azimuthal angles of `lambda''`.
    pub fn angles(&self) -> (T, T) {
        (self.dir.z.max(-T::one()).min(T::one()).acos(), self.dir.y.atan2(self.dir.x))
    }

    /// `D01` of this branch.
    pub fn d01(&self) -> DiagonalD01<T> {
        match self.branch {
            Branch::Separable => DiagonalD01::maximally_mixed(),
            Branch::Unsteerable => {
                // cos^2(theta''/2), sin^2(theta''/2)
                let cz = self.dir.z * lit(0.5);
                DiagonalD01 {
                    w01: lit::<T>(0.5) + cz,
                    w10: lit::<T>(0.5) - cz,
                }
            }
        }
    }
}

/// `chi(lambda) = min(sin theta'', c)`.
pub fn weight_chi<T: Real>(lambda: &BlochVector<T>, corr: &CorrelationMatrix<T>, c: T) -> Result<T> {
    lambda.ensure_unit()?;
    Ok(HiddenPoint::new(corr, c, lambda).ok_or(Error::DegenerateDirection)?.chi)
}

/// `rho_lambda^BC` of the fully local model.
pub fn hidden_state_bc2<T: Real>(lambda: &BlochVector<T>, corr: &CorrelationMatrix<T>, c: T) -> Result<DensityOperator<T>> {
    lambda.ensure_unit()?;
    let h = HiddenPoint::new(corr, c, lambda).ok_or(Error::DegenerateDirection)?;
    DensityOperator::new(hidden_operator(&GeneralizedPauli::new(), &h))
}

pub(crate) fn hidden_operator<T: Real>(g: &GeneralizedPauli<T>, h: &HiddenPoint<T>) -> Matrix<T> {
    let mut m = g.half_state([T::one(), h.dir.x, h.dir.y, h.dir.z]);
    m.add_scaled(h.chi, &h.d01().matrix());
    m.scale(T::one() / (T::one() + h.chi))
}

/// Parameters `(t1, T1 = s Diag[1, -1, v])` of the model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullyLocalParams<T> {
    pub v: T,
    pub s: T,
    pub t1: T,
    pub corr: CorrelationMatrix<T>,
    /// `c = 1 - w_c`
    pub c: T,
    /// `|lambda_z|` at which `sin theta'' = c`.
    pub u_c: T,
    /// Residuals of `int |T1 l| / 2pi = t1` and `int |T1 l| chi / 2pi = 1 - t1`
    /// evaluated on the sphere rule.
    pub residuals: [T; 2],
}

impl<T: Real> FullyLocalParams<T> {
    /// Polar angles (about `z`) where the weight switches branch.
    pub fn theta_breaks(&self) -> [T; 2] {
        let th = self.u_c.acos();
        [th, T::PI() - th]
    }

    /// GHZ-symmetric coordinates `p = Tx / 2`, `q = (t1 + Tz - 1/2) / (2 sqrt3)`.
    pub fn coordinates(&self) -> ThreeQubitGhzPoint<T> {
        ThreeQubitGhzPoint {
            p: self.corr.tx * lit(0.5),
            q: (self.t1 + self.corr.tz - lit(0.5)) / (lit::<T>(2.0) * sqrt3()),
        }
    }

    /// Whether `rho2(t1, T1, D01)` is positive: `t1 >= s (2 - v)`, which
    /// holds exactly for `v >= w_c`.
    pub fn is_physical(&self) -> bool {
        self.t1 - self.s * (lit::<T>(2.0) - self.v) >= -tol::<T>(1e-12)
    }

    pub fn max_residual(&self) -> T {
        self.residuals[0].abs().max(self.residuals[1].abs())
    }

    /// Both relations re-evaluated on `quad`.
    pub fn relation_residuals(&self, quad: &SplitSphereQuadrature<T>) -> [T; 2] {
        let z = BlochVector::ez();
        let [n, nchi] = quad
            .integrate(&z, &z, &self.theta_breaks(), |l, _| match HiddenPoint::new(&self.corr, self.c, l) {
                Some(h) => [h.norm, h.norm * h.chi],
                None => [T::zero(); 2],
            })
            .unwrap_or([T::zero(); 2]);
        [n / T::TAU() - self.t1, nchi / T::TAU() - (T::one() - self.t1)]
    }
}

/// `(G0, G1)` with `G0 = int |Diag[1,-1,v] l| / 2pi` and `G1` the same with the weight.
fn radial_integrals<T: Real>(v: T, c: T, u_c: T, order: usize) -> Result<(T, T)> {
    let gl = GaussLegendre::<T>::new(order)?;
    let theta_c = u_c.acos();
    let half_pi = T::FRAC_PI_2();
    let norm = |st: T, ct: T| (st * st + v * v * ct * ct).sqrt();
    // Over theta in [0, pi/2], doubled by the symmetry u -> -u.
    let mut g0 = T::zero();
    let mut g1 = T::zero();
    for (lo, hi, separable) in [(T::zero(), theta_c, true), (theta_c, half_pi, false)] {
        for (th, w) in gl.mapped(lo, hi) {
            let (st, ct) = th.sin_cos();
            let n = norm(st, ct);
            g0 += w * n * st;
            // n sin theta'' = sin theta
            g1 += w * st * if separable { st } else { c * n };
        }
    }
    Ok((g0 * lit(2.0), g1 * lit(2.0)))
}

/// Solves both relations for `T1 = s Diag[1, -1, v]`.
///
/// The weight is scale invariant, so the relations read `s G0 = t1` and
/// `s G1 = 1 - t1`, giving `s = 1 / (G0 + G1)` directly. The result is then
/// checked on the two-dimensional sphere rule.
pub fn fully_local_params<T: Real>(v: T, quad: &SplitSphereQuadrature<T>) -> Result<FullyLocalParams<T>> {
    if !(v > T::zero() && v <= T::one()) {
        return Err(Error::OutOfDomain {
            name: "v",
            value: to_f64(v),
            domain: "(0, 1]",
        });
    }
    let c = T::one() - critical_slope::<T>();
    let c2 = c * c;
    let u_c = ((T::one() - c2) / (T::one() - c2 + c2 * v * v)).sqrt();
    let (g0, g1) = radial_integrals(v, c, u_c, quad.order())?;
    let s = T::one() / (g0 + g1);
    let t1 = s * g0;
    if !(s > T::zero() && s <= T::one()) || !(t1 >= T::zero() && t1 <= T::one()) {
        return Err(Error::OutOfDomain {
            name: "s",
            value: to_f64(s),
            domain: "(0, 1] with t1 in [0, 1]",
        });
    }
    let mut params = FullyLocalParams {
        v,
        s,
        t1,
        corr: CorrelationMatrix::ghz_slice(s, v),
        c,
        u_c,
        residuals: [T::zero(); 2],
    };
    params.residuals = params.relation_residuals(quad);
    if params.max_residual() > tol::<T>(RELATION_TOL) {
        return Err(Error::InconsistentParameters {
            residual: to_f64(params.max_residual()),
        });
    }
    Ok(params)
}

/// The fully local model for verified parameters.
#[derive(Clone, Debug)]
pub struct FullyLocalModel<T> {
    params: FullyLocalParams<T>,
    paulis: GeneralizedPauli<T>,
}

impl<T: Real> FullyLocalModel<T> {
    /// Re-checks both relations on `quad`; rejects residuals above `1e-5`.
    pub fn new(params: FullyLocalParams<T>, quad: &SplitSphereQuadrature<T>) -> Result<Self> {
        let [r0, r1] = params.relation_residuals(quad);
        let r = r0.abs().max(r1.abs());
        if !(r <= tol::<T>(INCONSISTENT_TOL)) {
            return Err(Error::InconsistentParameters { residual: to_f64(r) });
        }
        Ok(Self {
            params,
            paulis: GeneralizedPauli::new(),
        })
    }

    pub fn params(&self) -> &FullyLocalParams<T> {
        &self.params
    }

    /// `omega(lambda) = |T1 lambda| (1 + chi) / 2 pi`.
    pub fn omega(&self, lambda: &BlochVector<T>) -> Result<T> {
        let h = HiddenPoint::new(&self.params.corr, self.params.c, lambda).ok_or(Error::DegenerateDirection)?;
        Ok(h.norm * (T::one() + h.chi) / T::TAU())
    }

    /// `(branch, rho_lambda^BC)`.
    pub fn hidden_state(&self, lambda: &BlochVector<T>) -> Result<(Branch, DensityOperator<T>)> {
        lambda.ensure_unit()?;
        let h = HiddenPoint::new(&self.params.corr, self.params.c, lambda).ok_or(Error::DegenerateDirection)?;
        Ok((h.branch, DensityOperator::new(hidden_operator(&self.paulis, &h))?))
    }

    /// `int omega P_A(a|x) rho_lambda^BC d lambda` for `a = +1, -1`.
    ///
    /// `omega rho^BC = |T1 l| / 2pi [(Sigma0 + l'' . Sigma) / 2 + chi D01]`, so
    /// six scalars per side suffice.
    pub fn assemblage(&self, x: &BlochVector<T>, quad: &impl SphereRule<T>) -> [Matrix<T>; 2] {
        let mut acc = [[T::zero(); 6]; 2];
        let z = BlochVector::ez();
        quad.visit(&z, x, &self.params.theta_breaks(), |lambda, w, side| {
            if let Some(h) = HiddenPoint::new(&self.params.corr, self.params.c, lambda) {
                let n = w * h.norm / T::TAU();
                let d = h.d01();
                let slot = &mut acc[side.index()];
                slot[0] += n;
                slot[1] += n * h.dir.x;
                slot[2] += n * h.dir.y;
                slot[3] += n * h.dir.z;
                slot[4] += n * h.chi * d.w01;
                slot[5] += n * h.chi * d.w10;
            }
        });
        acc.map(|k| {
            let mut m = self.paulis.half_state([k[0], k[1], k[2], k[3]]);
            let zr = T::zero();
            m.add_scaled(T::one(), &Matrix::from_real_diagonal(&[zr, k[4], k[5], zr]));
            m
        })
    }

    /// `P_f(a, b, c | x, y, z)` for all outcomes.
    pub fn joint(
        &self,
        x: &BlochVector<T>,
        y: &BlochVector<T>,
        z: &BlochVector<T>,
        quad: &impl SphereRule<T>,
    ) -> Joint3<T> {
        joint_from_assemblage(&self.assemblage(x, quad), y, z)
    }

    /// `P_f` averaged over all six relabellings of the parties.
    pub fn symmetrized_joint(
        &self,
        x: &BlochVector<T>,
        y: &BlochVector<T>,
        z: &BlochVector<T>,
        quad: &impl SphereRule<T>,
    ) -> Joint3<T> {
        // Only the party in role A needs an assemblage; compute each once.
        let settings = [x, y, z];
        let sigma = settings.map(|d| self.assemblage(d, quad));
        permutation_average_by(&PERMUTATIONS, |perm| {
            joint_from_assemblage(&sigma[perm[0]], settings[perm[1]], settings[perm[2]])
        })
    }

    /// `omega chi`-weighted average of the branch `D01` states over the sphere.
    pub fn effective_d01(&self, quad: &SplitSphereQuadrature<T>) -> Result<DiagonalD01<T>> {
        let z = BlochVector::ez();
        let [w01, w10] = quad
            .integrate(&z, &z, &self.params.theta_breaks(), |l, _| {
                match HiddenPoint::new(&self.params.corr, self.params.c, l) {
                    Some(h) => {
                        let d = h.d01();
                        [h.norm * h.chi * d.w01, h.norm * h.chi * d.w10]
                    }
                    None => [T::zero(); 2],
                }
            })
            .unwrap_or([T::zero(); 2]);
        let total = w01 + w10;
        DiagonalD01::new(w01 / total, w10 / total)
    }

    /// The state the model is built for, with `D01` replaced by its average.
    pub fn target_state(&self, quad: &SplitSphereQuadrature<T>) -> Result<DensityOperator<T>> {
        rho2(self.params.t1, &self.params.corr, &self.effective_d01(quad)?)
    }
}

/// See [`FullyLocalModel::effective_d01`].
pub fn effective_d01<T: Real>(params: &FullyLocalParams<T>, quad: &SplitSphereQuadrature<T>) -> Result<DiagonalD01<T>> {
    FullyLocalModel::new(*params, quad)?.effective_d01(quad)
}

/// `P_f(a, b, c | x, y, z)` of the (unsymmetrized) fully local model.
#[allow(clippy::too_many_arguments)]
pub fn fully_local_joint<T: Real>(
    params: &FullyLocalParams<T>,
    x: &BlochVector<T>,
    y: &BlochVector<T>,
    z: &BlochVector<T>,
    a: Outcome,
    b: Outcome,
    c: Outcome,
    quad: &SplitSphereQuadrature<T>,
) -> Result<T> {
    [x, y, z].iter().try_for_each(|u| u.ensure_unit())?;
    let j = FullyLocalModel::new(*params, quad)?.joint(x, y, z, quad);
    Ok(j[a.index()][b.index()][c.index()])
}

/// Permutation-averaged fully local model, all eight outcomes.
pub fn symmetrized_fully_local_joint<T: Real>(
    params: &FullyLocalParams<T>,
    settings: [&BlochVector<T>; 3],
    quad: &SplitSphereQuadrature<T>,
) -> Result<Joint3<T>> {
    settings.iter().try_for_each(|u| u.ensure_unit())?;
    let [x, y, z] = settings;
    Ok(FullyLocalModel::new(*params, quad)?.symmetrized_joint(x, y, z, quad))
}

/// GHZ-symmetric point of the numerically constructed model.
pub fn fully_local_curve_numeric<T: Real>(v: T, quad: &SplitSphereQuadrature<T>) -> Result<ThreeQubitGhzPoint<T>> {
    Ok(fully_local_params(v, quad)?.coordinates())
}

/// `G0(v) = v^2 arctan(sqrt(1 - v^2)) / sqrt(1 - v^2) + 1`, with `G0(1) = 2`.
pub fn closed_form_g0<T: Real>(v: T) -> T {
    let k = (T::one() - v * v).max(T::zero()).sqrt();
    let ratio = if k < lit(1e-6) {
        T::one() - k * k / lit(3.0)
    } else {
        k.atan() / k
    };
    v * v * ratio + T::one()
}

/// `G1(v)` as printed, with `arccosh(y) / sqrt(v^2 - 1)` evaluated through its
/// analytic continuation so that `v <= 1` and `v -> 1` are regular.
pub fn closed_form_g1<T: Real>(v: T, c: T) -> T {
    let two = lit::<T>(2.0);
    let c2 = c * c;
    let v2 = v * v;
    let a = c2 * (v2 - T::one()) + T::one();
    let b = c2 * (v2 * v2 - T::one()) + T::one();
    let root = (T::one() - c2).sqrt();
    // arccosh(sqrt(b/a)) / sqrt(v^2 - 1) = (c v / sqrt a) H(b/a - 1)
    let e = c2 * v2 * (v2 - T::one()) / a;
    let arccosh_term = c * v * asinh_ratio(e) / a.sqrt();
    c2 * v * b.max(T::zero()).sqrt() / (two * a)
        + c * arccosh_term / two
        + (root / (c * v)).atan()
        + c * v * root / a
}

/// Curve `p = 1 / (2 G)`, `q = [(G0 + v) / G - 1/2] / (2 sqrt3)` from the
/// printed closed forms, `G = G0 + G1`.
pub fn fully_local_curve_closed_form<T: Real>(v: T) -> Result<ThreeQubitGhzPoint<T>> {
    if !(v > T::zero() && v <= T::one()) {
        return Err(Error::OutOfDomain {
            name: "v",
            value: to_f64(v),
            domain: "(0, 1]",
        });
    }
    let c = T::one() - critical_slope::<T>();
    let g0 = closed_form_g0(v);
    let g = g0 + closed_form_g1(v, c);
    Ok(ThreeQubitGhzPoint {
        p: T::one() / (lit::<T>(2.0) * g),
        q: ((g0 + v) / g - lit(0.5)) / (lit::<T>(2.0) * sqrt3()),
    })
}

/// `|01><01| - |10><10|` coefficient of each conditional assemblage; the
/// part of the model that no fixed `D01` can reproduce.
pub fn odd_parity_imbalance<T: Real>(sigma: &[Matrix<T>; 2]) -> [T; 2] {
    let (_, z01) = odd_parity_operators::<T>();
    sigma.each_ref().map(|m| m.trace_product_re(&z01) * lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghz::{symmetrize_coords, three_qubit_operator};
    use crate::linalg::partial_transpose;
    use crate::linalg::Qubit;
    use crate::numerics::sphere_sample;
    use crate::tripartite::{max_joint_deviation, quantum_joint3, simplex_residual};
    use approx::assert_abs_diff_eq;

    fn quad() -> SplitSphereQuadrature<f64> {
        SplitSphereQuadrature::new(64).unwrap()
    }

    #[test]
    fn rho2_examples() {
        let t = CorrelationMatrix::new(0.4, -0.4, 0.2);
        let d = DiagonalD01::new(0.3, 0.7).unwrap();
        let r1 = crate::tripartite::rho1(&t).unwrap();
        assert!(rho2(1.0, &t, &d).unwrap().matrix().max_abs_diff(r1.matrix()) < 1e-15);

        let zero = rho2(0.0, &CorrelationMatrix::zero(), &d).unwrap();
        let expected = kron(&Matrix::identity(2), &d.matrix()).scale(0.5);
        assert!(zero.matrix().max_abs_diff(&expected) < 1e-15);
        assert!(rho2(0.2, &CorrelationMatrix::new(1.0, -1.0, 1.0), &d).is_err());
        assert!(DiagonalD01::new(0.6, 0.6).is_err());
    }

    #[test]
    fn rho2_coordinates() {
        for (t, tx, tz) in [(0.6, 0.3, 0.2), (0.9, 0.1, -0.05), (0.5, 0.25, 0.25)] {
            let corr = CorrelationMatrix::new(tx, -tx, tz);
            let rho = rho2(t, &corr, &DiagonalD01::new(0.2, 0.8).unwrap()).unwrap();
            let pt = symmetrize_coords(&rho).unwrap();
            assert_abs_diff_eq!(pt.p, tx / 2.0, epsilon = 1e-14);
            assert_abs_diff_eq!(pt.q, (t + tz - 0.5) / (2.0 * 3f64.sqrt()), epsilon = 1e-14);
        }
    }

    #[test]
    fn weight_examples() {
        let c = 1.0 - critical_slope::<f64>();
        assert_abs_diff_eq!(c, 0.646, epsilon = 5e-4);
        let corr = CorrelationMatrix::new(0.3, -0.3, 0.15);
        assert_eq!(weight_chi(&BlochVector::ez(), &corr, c).unwrap(), 0.0);
        assert_abs_diff_eq!(weight_chi(&BlochVector::ex(), &corr, c).unwrap(), c);
        for l in sphere_sample::<f64>(5, 1000) {
            assert_abs_diff_eq!(weight_chi(&l, &corr, c).unwrap(), weight_chi(&-l, &corr, c).unwrap(), epsilon = 1e-15);
        }
        assert!(weight_chi(&BlochVector::ez(), &CorrelationMatrix::new(1.0, 1.0, 0.0), c).is_err());
    }

    #[test]
    fn hidden_state_branches() {
        let c = 1.0 - critical_slope::<f64>();
        let corr = CorrelationMatrix::new(0.3, -0.3, 0.15);
        let pole = hidden_state_bc2(&BlochVector::ez(), &corr, c).unwrap();
        assert!(pole.matrix().max_abs_diff(&Matrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0])) < 1e-15);
        for l in sphere_sample::<f64>(9, 200) {
            let rho = hidden_state_bc2(&l, &corr, c).unwrap();
            assert!(rho.min_eigenvalue() > -1e-12);
            let h = HiddenPoint::new(&corr, c, &l).unwrap();
            if h.branch == Branch::Separable {
                let pt = partial_transpose(rho.matrix(), Qubit::B).unwrap();
                assert!(crate::linalg::hermitian_eigenvalues(&pt).unwrap()[0] >= -1e-10);
            }
        }
    }

    #[test]
    fn params_at_unit_slope() {
        let p = fully_local_params(1.0, &quad()).unwrap();
        // |T1 l| = s, so t1 = 2 s; the weight integral is sin over the caps and c on the band.
        assert_abs_diff_eq!(p.t1, 2.0 * p.s, epsilon = 1e-13);
        let c = p.c;
        let root = (1.0 - c * c).sqrt();
        // 2 [c u_c + int_{u_c}^1 sqrt(1 - u^2) du] with u_c = sqrt(1 - c^2)
        let g1 = c * root + (c / root).atan();
        assert_abs_diff_eq!(p.u_c, root, epsilon = 1e-15);
        assert_abs_diff_eq!(p.s, 1.0 / (2.0 + g1), epsilon = 1e-13);
        assert!(p.max_residual() < 1e-10);
    }

    #[test]
    fn params_residuals_and_ranges() {
        let wc = critical_slope::<f64>();
        for v in [0.2, 0.4, 0.6, 0.8, 1.0] {
            let p = fully_local_params(v, &quad()).unwrap();
            assert!(p.max_residual() <= 1e-6, "v = {v}: {:?}", p.residuals);
            assert!((0.0..=1.0).contains(&p.t1));
            // rho2 is a state exactly when t1 >= s (2 - v), i.e. v >= w_c.
            assert_eq!(p.coordinates().validate().is_ok(), v >= wc, "v = {v}");
            assert_eq!(p.is_physical(), v >= wc);
        }
        let edge = fully_local_params(wc, &quad()).unwrap().coordinates();
        assert_abs_diff_eq!(edge.p, crate::ghz::triangle_edge_p(edge.q), epsilon = 1e-12);
        assert!(fully_local_params(0.0, &quad()).is_err());
        assert!(fully_local_params(1.2, &quad()).is_err());
    }

    #[test]
    fn symmetrized_model_matches_the_ghz_symmetric_state() {
        let q = quad();
        let params = fully_local_params(0.5, &q).unwrap();
        let model = FullyLocalModel::new(params, &q).unwrap();
        let pt = params.coordinates();
        let rho = three_qubit_operator(pt.p, pt.q);
        for seed in 0..4 {
            let s = sphere_sample::<f64>(seed, 3);
            let j = model.symmetrized_joint(&s[0], &s[1], &s[2], &q);
            assert!(simplex_residual(&j) < 1e-10);
            assert!(max_joint_deviation(&j, &quantum_joint3(&rho, &s[0], &s[1], &s[2])) < 1e-9);
        }
    }

    #[test]
    fn effective_d01_is_maximally_mixed() {
        let q = quad();
        let params = fully_local_params(0.7, &q).unwrap();
        let d = effective_d01(&params, &q).unwrap();
        assert_abs_diff_eq!(d.w01, 0.5, epsilon = 1e-12);
        let target = FullyLocalModel::new(params, &q).unwrap().target_state(&q).unwrap();
        let pt = symmetrize_coords(&target).unwrap();
        assert_abs_diff_eq!(pt.p, params.coordinates().p, epsilon = 1e-14);
        assert_abs_diff_eq!(pt.q, params.coordinates().q, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_limits() {
        assert_abs_diff_eq!(closed_form_g0(1.0f64), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(closed_form_g0(1.0f64 - 1e-13), 2.0, epsilon = 1e-9);
        let c = 1.0 - critical_slope::<f64>();
        let root = (1.0 - c * c).sqrt();
        let at_one = c * c + (root / c).atan() + c * root;
        assert_abs_diff_eq!(closed_form_g1(1.0, c), at_one, epsilon = 1e-14);
        // continuity through v = 1 of the continued arccosh term
        assert_abs_diff_eq!(closed_form_g1(1.0 - 1e-7, c), closed_form_g1(1.0 + 1e-7, c), epsilon = 1e-6);
        for i in 13..=20 {
            let pt = fully_local_curve_closed_form(i as f64 / 20.0).unwrap();
            assert!(pt.validate().is_ok(), "{pt:?}");
        }
        // The printed forms leave the triangle for small v.
        assert!(fully_local_curve_closed_form(0.3f64).unwrap().validate().is_err());
        assert!(fully_local_curve_closed_form(0.0f64).is_err());
    }
}
