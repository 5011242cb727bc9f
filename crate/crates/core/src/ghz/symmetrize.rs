//! Projection of three-qubit operators onto the GHZ-symmetric family.

use num_complex::Complex;
use num_traits::Zero;

use super::{ghz_vector, ThreeQubitGhzPoint};
use crate::error::{Error, Result};
use crate::linalg::{kron_all, pauli_x, DensityOperator, Matrix};
use crate::scalar::{from_usize, lit, sqrt3, to_f64, Real};

/// Coordinates of the GHZ-symmetrized operator, read off from
/// `<G+|rho|G+>` and `<G-|rho|G->`.
///
/// `rho` only needs to be Hermitian with unit trace; positivity is replaced
/// by the requirement that the coordinates land inside the triangle.
pub fn symmetrize_coords<T: Real>(rho: &DensityOperator<T>) -> Result<ThreeQubitGhzPoint<T>> {
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: rho.dim(),
        });
    }
    let pt = ghz_coordinates(rho.matrix());
    match pt.violated_constraint() {
        Some(constraint) => Err(Error::UnphysicalPseudoState {
            p: to_f64(pt.p),
            q: to_f64(pt.q),
            constraint,
        }),
        None => Ok(pt),
    }
}

/// Unchecked coordinate extraction.
pub(crate) fn ghz_coordinates<T: Real>(m: &Matrix<T>) -> ThreeQubitGhzPoint<T> {
    let plus = m.expectation(&ghz_vector(T::one())).re;
    let minus = m.expectation(&ghz_vector(-T::one())).re;
    ThreeQubitGhzPoint {
        p: (plus - minus) * lit(0.5),
        q: (plus + minus - lit(0.25)) / sqrt3(),
    }
}

/// The GHZ symmetry group: qubit permutations, the simultaneous flip
/// `X (x) X (x) X`, and correlated z-rotations
/// `e^{i a Z} (x) e^{i b Z} (x) e^{-i (a + b) Z}`.
#[derive(Clone, Debug)]
pub struct GhzSymmetryGroup<T> {
    permutations: Vec<Matrix<T>>,
    flip: Matrix<T>,
    n_phi: usize,
}

impl<T: Real> GhzSymmetryGroup<T> {
    /// Rotation angles are sampled on an `n_phi x n_phi` uniform grid.
    pub fn new(n_phi: usize) -> Self {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let permutations = PERMS.iter().map(|perm| permutation_unitary(perm)).collect();
        let x = pauli_x::<T>();
        Self {
            permutations,
            flip: kron_all(&[&x, &x, &x]),
            n_phi: n_phi.max(1),
        }
    }

    pub fn permutations(&self) -> &[Matrix<T>] {
        &self.permutations
    }

    pub fn flip(&self) -> &Matrix<T> {
        &self.flip
    }

    /// Diagonal of the rotation unitary for angles `(a, b)`.
    pub fn rotation_phases(a: T, b: T) -> [Complex<T>; 8] {
        let mut out = [Complex::zero(); 8];
        for (idx, slot) in out.iter_mut().enumerate() {
            let z = |bit: usize| if (idx >> (2 - bit)) & 1 == 0 { T::one() } else { -T::one() };
            let angle = a * z(0) + b * z(1) - (a + b) * z(2);
            *slot = Complex::new(angle.cos(), angle.sin());
        }
        out
    }

    pub fn rotation(a: T, b: T) -> Matrix<T> {
        let d = Self::rotation_phases(a, b);
        Matrix::from_fn(8, |i, j| if i == j { d[i] } else { Complex::zero() })
    }

    /// Numerical group average `int u rho u^dagger du`.
    pub fn average(&self, rho: &Matrix<T>) -> Matrix<T> {
        let n = self.n_phi;
        let step = T::TAU() / from_usize(n);
        let weight = T::one() / from_usize(n * n);

        let mut rotated = Matrix::zeros(8);
        for i in 0..n {
            for j in 0..n {
                let d = Self::rotation_phases(step * from_usize(i), step * from_usize(j));
                let term = Matrix::from_fn(8, |r, c| d[r] * rho[(r, c)] * d[c].conj());
                rotated.add_scaled(weight, &term);
            }
        }

        let mut flipped = rotated.clone();
        flipped.add_scaled(T::one(), &rotated.conjugate_by(&self.flip));
        let flipped = flipped.scale(lit(0.5));

        let mut out = Matrix::zeros(8);
        let w = T::one() / from_usize(self.permutations.len());
        for perm in &self.permutations {
            out.add_scaled(w, &flipped.conjugate_by(perm));
        }
        out.hermitian_part()
    }
}

/// Unitary that moves qubit `k` to position `perm[k]`.
fn permutation_unitary<T: Real>(perm: &[usize; 3]) -> Matrix<T> {
    let mut m = Matrix::zeros(8);
    for idx in 0..8usize {
        let bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
        let mut out = [0usize; 3];
        for k in 0..3 {
            out[perm[k]] = bits[k];
        }
        let target = (out[0] << 2) | (out[1] << 1) | out[2];
        m[(target, idx)] = Complex::new(T::one(), T::zero());
    }
    m
}

/// Group average of `rho` over the GHZ symmetry group, with the rotation
/// angles on an `n_phi x n_phi` grid (exact once `n_phi >= 5`).
pub fn symmetrize_oracle<T: Real>(rho: &DensityOperator<T>, n_phi: usize) -> Result<DensityOperator<T>> {
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: rho.dim(),
        });
    }
    DensityOperator::new(GhzSymmetryGroup::new(n_phi).average(rho.matrix()))
}
