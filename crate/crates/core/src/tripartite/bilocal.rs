//! Bilocal model for `rho1(T) = [I (x) Sigma0 + (T sigma) . Sigma] / 4`.

use super::{joint_from_assemblage, permutation_average_by, GeneralizedPauli, Joint3};
use crate::error::{Error, Result};
use crate::ghz::{CorrelationMatrix, ThreeQubitGhzPoint};
use crate::linalg::{kron, paulis, BlochVector, DensityOperator, Matrix, Outcome};
use crate::numerics::{SphereRule, SplitSphereQuadrature};
use crate::scalar::{lit, sqrt3, tol, to_f64, Real};
use crate::steering::{boundary_p_of_w, critical_slope, hidden_bloch, LhsModel};

/// Three-qubit extension `rho1(T)` of the Bell-diagonal state with correlations `T`.
pub fn rho1<T: Real>(t: &CorrelationMatrix<T>) -> Result<DensityOperator<T>> {
    t.bell_diagonal_state()?;
    let g = GeneralizedPauli::new();
    let mut m = kron(&Matrix::identity(2), &g.sigma0);
    for ((tk, sk), gk) in t.diagonal().into_iter().zip(&paulis()).zip(g.vector()) {
        m.add_scaled(tk, &kron(sk, gk));
    }
    DensityOperator::new(m.scale(lit(0.25)))
}

/// The LHS model of a boundary matrix `T0` with Bob's qubit embedded in `BC`.
#[derive(Clone, Debug)]
pub struct BilocalModel<T> {
    t: CorrelationMatrix<T>,
    paulis: GeneralizedPauli<T>,
}

impl<T: Real> BilocalModel<T> {
    /// Errors with [`Error::OffBoundary`] unless `T0` saturates the normalization.
    pub fn new(t: CorrelationMatrix<T>, quad: &SplitSphereQuadrature<T>) -> Result<Self> {
        LhsModel::new(t, quad)?;
        Ok(Self::unchecked(t))
    }

    pub fn unchecked(t: CorrelationMatrix<T>) -> Self {
        Self {
            t,
            paulis: GeneralizedPauli::new(),
        }
    }

    pub fn correlations(&self) -> &CorrelationMatrix<T> {
        &self.t
    }

    /// `(omega(lambda), rho_lambda^BC)` with `rho_lambda^BC = (Sigma0 + lambda' . Sigma) / 2`.
    pub fn hidden_state(&self, lambda: &BlochVector<T>) -> Result<(T, DensityOperator<T>)> {
        lambda.ensure_unit()?;
        let (omega, b) = hidden_bloch(&self.t, lambda).ok_or(Error::DegenerateDirection)?;
        let rho = self.paulis.half_state([T::one(), b.x, b.y, b.z]);
        Ok((omega, DensityOperator::new(rho)?))
    }

    /// `int omega P_A(a|x) rho_lambda^BC d lambda` for `a = +1, -1`.
    pub fn assemblage(&self, x: &BlochVector<T>, quad: &impl SphereRule<T>) -> [Matrix<T>; 2] {
        let mut acc = [[T::zero(); 4]; 2];
        quad.visit(x, x, &[], |lambda, w, side| {
            if let Some((omega, b)) = hidden_bloch(&self.t, lambda) {
                let slot = &mut acc[side.index()];
                let ww = w * omega;
                slot[0] += ww;
                slot[1] += ww * b.x;
                slot[2] += ww * b.y;
                slot[3] += ww * b.z;
            }
        });
        acc.map(|c| self.paulis.half_state(c))
    }

    /// `P_b(a, b, c | x, y, z)` for all outcomes.
    pub fn joint(
        &self,
        x: &BlochVector<T>,
        y: &BlochVector<T>,
        z: &BlochVector<T>,
        quad: &impl SphereRule<T>,
    ) -> Joint3<T> {
        joint_from_assemblage(&self.assemblage(x, quad), y, z)
    }

    /// Average of the model with its `A <-> B` and `A <-> C` relabellings.
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
        permutation_average_by(&[[0, 1, 2], [1, 0, 2], [2, 1, 0]], |perm| {
            joint_from_assemblage(&sigma[perm[0]], settings[perm[1]], settings[perm[2]])
        })
    }
}

fn check_units<T: Real>(v: &[&BlochVector<T>]) -> Result<()> {
    v.iter().try_for_each(|u| u.ensure_unit())
}

/// `int omega P_A(a|x) P_BC(b, c|y, z) d lambda` of the bilocal model.
#[allow(clippy::too_many_arguments)]
pub fn bilocal_joint<T: Real>(
    t0: &CorrelationMatrix<T>,
    x: &BlochVector<T>,
    y: &BlochVector<T>,
    z: &BlochVector<T>,
    a: Outcome,
    b: Outcome,
    c: Outcome,
    quad: &SplitSphereQuadrature<T>,
) -> Result<T> {
    check_units(&[x, y, z])?;
    let j = BilocalModel::new(*t0, quad)?.joint(x, y, z, quad);
    Ok(j[a.index()][b.index()][c.index()])
}

/// Symmetrized bilocal model, all eight outcomes.
pub fn symmetrized_bilocal_joint<T: Real>(
    t0: &CorrelationMatrix<T>,
    settings: [&BlochVector<T>; 3],
    quad: &SplitSphereQuadrature<T>,
) -> Result<Joint3<T>> {
    check_units(&settings)?;
    let [x, y, z] = settings;
    Ok(BilocalModel::new(*t0, quad)?.symmetrized_joint(x, y, z, quad))
}

/// GHZ-symmetrized `rho1(T0)` for the boundary matrix of slope `w`:
/// `p` from the steering boundary, `q = (2 p w + 1/2) / (2 sqrt3)`.
pub fn bilocal_curve<T: Real>(w: T) -> Result<ThreeQubitGhzPoint<T>> {
    let wc: T = critical_slope();
    if !(w.abs() >= wc - tol::<T>(1e-12)) {
        return Err(Error::OutOfDomain {
            name: "w",
            value: to_f64(w),
            domain: "|w| >= w_c",
        });
    }
    let p = boundary_p_of_w(w)?.p;
    Ok(ThreeQubitGhzPoint {
        p,
        q: (lit::<T>(2.0) * p * w + lit(0.5)) / (lit::<T>(2.0) * sqrt3()),
    })
}
