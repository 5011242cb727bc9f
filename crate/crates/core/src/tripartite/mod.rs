//! Tripartite extensions of the two-qubit LHS model.
//!
//! Replacing Bob's basis `{|0>, |1>}` by `{|00>, |11>}` of a pair `BC`
//! turns the Bell-diagonal state into the three-qubit `rho1(T)`, and the
//! LHS model into a bilocal model in which `BC` answers jointly. Mixing in
//! weight on `span{|01>, |10>}` makes every hidden state of `BC` local and
//! yields a fully local model for `rho2(t, T, D01)`.

mod bilocal;
mod certify;
mod fully_local;

pub use bilocal::{bilocal_curve, bilocal_joint, rho1, symmetrized_bilocal_joint, BilocalModel};
pub use certify::{
    branch1_mu_joint, branch2_mu_joint, certify_hidden_state, critical_boundary_point, filter_map, filtered_state,
    separable_decomposition, Certificate, CertificationCounts,
};
pub use fully_local::{
    closed_form_g0, closed_form_g1, effective_d01, fully_local_curve_closed_form,
    fully_local_curve_numeric, fully_local_joint, fully_local_params, hidden_state_bc2, odd_parity_imbalance, rho2,
    symmetrized_fully_local_joint, weight_chi, Branch, DiagonalD01, FullyLocalModel,
    FullyLocalParams,
};

use num_complex::Complex;

use crate::linalg::{kron, kron_all, projector_unchecked, BlochVector, Matrix, Outcome};
use crate::scalar::{from_usize, lit, Real};

/// Outcome distribution of three parties, indexed `[a][b][c]`.
pub type Joint3<T> = [[[T; 2]; 2]; 2];

/// Pauli operators embedded in `span{|00>, |11>}` of two qubits.
#[derive(Clone, Debug)]
pub struct GeneralizedPauli<T> {
    pub sigma0: Matrix<T>,
    pub sigma_x: Matrix<T>,
    pub sigma_y: Matrix<T>,
    pub sigma_z: Matrix<T>,
}

impl<T: Real> GeneralizedPauli<T> {
    pub fn new() -> Self {
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        let at = |entries: &[(usize, usize, Complex<T>)]| {
            let mut m = Matrix::zeros(4);
            for &(r, c, v) in entries {
                m[(r, c)] = v;
            }
            m
        };
        Self {
            sigma0: at(&[(0, 0, one), (3, 3, one)]),
            sigma_x: at(&[(0, 3, one), (3, 0, one)]),
            sigma_y: at(&[(0, 3, -i), (3, 0, i)]),
            sigma_z: at(&[(0, 0, one), (3, 3, -one)]),
        }
    }

    pub fn vector(&self) -> [&Matrix<T>; 3] {
        [&self.sigma_x, &self.sigma_y, &self.sigma_z]
    }

    /// `(Sigma0 + n . Sigma) / 2` scaled by `weight`, from the accumulated
    /// coefficients `[weight, weight n_x, weight n_y, weight n_z]`.
    pub(crate) fn half_state(&self, coeffs: [T; 4]) -> Matrix<T> {
        let mut m = self.sigma0.scale(coeffs[0]);
        for (c, s) in coeffs[1..].iter().zip(self.vector()) {
            m.add_scaled(*c, s);
        }
        m.scale(lit(0.5))
    }
}

impl<T: Real> Default for GeneralizedPauli<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// `|01><01| + |10><10|` and `|01><01| - |10><10|`.
pub(crate) fn odd_parity_operators<T: Real>() -> (Matrix<T>, Matrix<T>) {
    let (o, z) = (T::one(), T::zero());
    (
        Matrix::from_real_diagonal(&[z, o, o, z]),
        Matrix::from_real_diagonal(&[z, o, -o, z]),
    )
}

/// `P(b, c) = Tr(Pi_b^y (x) Pi_c^z sigma)` for a (possibly unnormalized) two-qubit operator.
pub fn pair_probabilities<T: Real>(sigma: &Matrix<T>, y: &BlochVector<T>, z: &BlochVector<T>) -> [[T; 2]; 2] {
    let mut out = [[T::zero(); 2]; 2];
    for b in Outcome::ALL {
        let pb = projector_unchecked(y, b);
        for c in Outcome::ALL {
            out[b.index()][c.index()] = sigma.trace_product_re(&kron(&pb, &projector_unchecked(z, c)));
        }
    }
    out
}

/// Quantum prediction `Tr(Pi_a^x (x) Pi_b^y (x) Pi_c^z rho)` for all outcomes.
pub fn quantum_joint3<T: Real>(rho: &Matrix<T>, x: &BlochVector<T>, y: &BlochVector<T>, z: &BlochVector<T>) -> Joint3<T> {
    let mut out = [[[T::zero(); 2]; 2]; 2];
    for a in Outcome::ALL {
        let pa = projector_unchecked(x, a);
        for b in Outcome::ALL {
            let pb = projector_unchecked(y, b);
            for c in Outcome::ALL {
                let pc = projector_unchecked(z, c);
                out[a.index()][b.index()][c.index()] = rho.trace_product_re(&kron_all(&[&pa, &pb, &pc]));
            }
        }
    }
    out
}

/// Joint distribution from the two conditional `BC` assemblages of `A`.
pub(crate) fn joint_from_assemblage<T: Real>(sigma: &[Matrix<T>; 2], y: &BlochVector<T>, z: &BlochVector<T>) -> Joint3<T> {
    [pair_probabilities(&sigma[0], y, z), pair_probabilities(&sigma[1], y, z)]
}

/// The six relabellings of `(A, B, C)`; `perm[k]` is the party playing role `k`.
pub const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];

/// Average of `model` over the given relabellings of the parties.
///
/// For `perm`, party `perm[k]` takes role `k` of the model, so its setting is
/// fed into slot `k` and its outcome is read from slot `k`.
pub fn permutation_average<T: Real>(
    perms: &[[usize; 3]],
    settings: [&BlochVector<T>; 3],
    mut model: impl FnMut([&BlochVector<T>; 3]) -> Joint3<T>,
) -> Joint3<T> {
    permutation_average_by(perms, |perm| model(perm.map(|k| settings[k])))
}

/// [`permutation_average`] with `model` receiving the permutation itself.
pub fn permutation_average_by<T: Real>(
    perms: &[[usize; 3]],
    mut model: impl FnMut([usize; 3]) -> Joint3<T>,
) -> Joint3<T> {
    let mut out = [[[T::zero(); 2]; 2]; 2];
    let w = T::one() / from_usize(perms.len());
    for perm in perms {
        let j = model(*perm);
        for (i0, plane) in j.iter().enumerate() {
            for (i1, row) in plane.iter().enumerate() {
                for (i2, v) in row.iter().enumerate() {
                    let roles = [i0, i1, i2];
                    let mut o = [0usize; 3];
                    for k in 0..3 {
                        o[perm[k]] = roles[k];
                    }
                    out[o[0]][o[1]][o[2]] += w * *v;
                }
            }
        }
    }
    out
}

/// Largest absolute difference between two joint distributions.
pub fn max_joint_deviation<T: Real>(a: &Joint3<T>, b: &Joint3<T>) -> T {
    let mut m = T::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                m = m.max((a[i][j][k] - b[i][j][k]).abs());
            }
        }
    }
    m
}

/// `|sum - 1|` of a joint distribution.
pub fn simplex_residual<T: Real>(j: &Joint3<T>) -> T {
    let s: T = j.iter().flatten().flatten().copied().sum();
    (s - T::one()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::paulis;

    #[test]
    fn generalized_paulis_obey_the_qubit_algebra() {
        let g = GeneralizedPauli::<f64>::new();
        assert!((&g.sigma0 * &g.sigma0).max_abs_diff(&g.sigma0) < 1e-15);
        let s = g.vector();
        for a in s {
            assert!((a * a).max_abs_diff(&g.sigma0) < 1e-15);
            assert!((&g.sigma0 * a).max_abs_diff(a) < 1e-15);
        }
        let i = Complex::new(0.0, 1.0);
        assert!((s[0] * s[1]).max_abs_diff(&s[2].scale_complex(i)) < 1e-15);
        let (odd, _) = odd_parity_operators::<f64>();
        for m in s.iter().copied().chain([&g.sigma0]) {
            assert!((m * &odd).frobenius_norm() < 1e-15);
        }
        // Embedding of sigma_k through |0> -> |00>, |1> -> |11>.
        let p = paulis::<f64>();
        for (k, sk) in s.iter().enumerate() {
            for (r, rr) in [(0, 0), (1, 3)] {
                for (c, cc) in [(0, 0), (1, 3)] {
                    assert_eq!(sk[(rr, cc)], p[k][(r, c)]);
                }
            }
        }
    }

    #[test]
    fn permutation_average_relabels_outcomes() {
        let x = BlochVector::<f64>::ex();
        let y = BlochVector::ey();
        let z = BlochVector::ez();
        // A model that answers +1 on A exactly when A measures along x.
        let model = |s: [&BlochVector<f64>; 3]| {
            let mut j = [[[0.0; 2]; 2]; 2];
            let a = if s[0].x == 1.0 { 0 } else { 1 };
            j[a][0][0] = 1.0;
            j
        };
        let avg = permutation_average(&[[0, 1, 2], [1, 0, 2]], [&x, &y, &z], model);
        // identity: A sees x -> (+,+,+); swap: role A is party B (y) -> B outputs -, A outputs +.
        assert_eq!(avg[0][0][0], 0.5);
        assert_eq!(avg[0][1][0], 0.5);
    }
}
