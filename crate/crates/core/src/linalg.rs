//! Dense complex matrices for two and three qubits.
//!
//! Every object in this crate is at most 8x8, so matrices are stored densely
//! in row-major order and all algorithms are direct.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, tol, to_f64, Real};

/// Hermiticity drift accepted before an operator is rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace drift accepted for a normalized operator.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalue floor for an operator to count as positive semidefinite.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Norm drift accepted for a unit direction.
pub const UNIT_TOL: f64 = 1e-12;

/// Square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                Complex::new(diag[i], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    /// Rank-one operator `|psi><psi|`.
    pub fn outer(psi: &[Complex<T>]) -> Self {
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex<T>>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Complex::zero(), |acc, z| acc + z)
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: T, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    /// `(H + H^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = lit::<T>(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> T {
        let mut dev = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `<psi| self |psi>`.
    pub fn expectation(&self, psi: &[Complex<T>]) -> Complex<T> {
        let mut acc = Complex::zero();
        for i in 0..self.dim {
            let mut row = Complex::zero();
            for j in 0..self.dim {
                row += self[(i, j)] * psi[j];
            }
            acc += psi[i].conj() * row;
        }
        acc
    }

    /// `Re Tr(self * other)`, without forming the product.
    pub fn trace_product_re(&self, other: &Self) -> T {
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            for k in 0..n {
                acc += (self.data[i * n + k] * other.data[k * n + i]).re;
            }
        }
        acc
    }

    /// `U self U^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.scale(-T::one())
    }
}

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(lit(re), lit(im))
}

pub fn pauli_x<T: Real>() -> Matrix<T> {
    Matrix::from_fn(2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

pub fn pauli_y<T: Real>() -> Matrix<T> {
    Matrix::from_fn(2, |i, j| match (i, j) {
        (0, 1) => c(0.0, -1.0),
        (1, 0) => c(0.0, 1.0),
        _ => c(0.0, 0.0),
    })
}

pub fn pauli_z<T: Real>() -> Matrix<T> {
    Matrix::from_real_diagonal(&[T::one(), -T::one()])
}

/// `[sigma_x, sigma_y, sigma_z]`.
pub fn paulis<T: Real>() -> [Matrix<T>; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

/// Kronecker product.
pub fn kron<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (m, n) = (a.dim, b.dim);
    Matrix::from_fn(m * n, |i, j| a[(i / n, j / n)] * b[(i % n, j % n)])
}

/// Kronecker product of a list of factors.
pub fn kron_all<T: Real>(factors: &[&Matrix<T>]) -> Matrix<T> {
    factors
        .iter()
        .fold(Matrix::identity(1), |acc, f| kron(&acc, f))
}

/// Kronecker product of state vectors.
pub fn kron_vec<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Reduced operator on the subsystems listed in `keep` (ascending order of
/// appearance in `dims` is used regardless of the order in `keep`).
pub fn partial_trace<T: Real>(rho: &Matrix<T>, dims: &[usize], keep: &[usize]) -> Result<Matrix<T>> {
    let total: usize = dims.iter().product();
    if total != rho.dim {
        return Err(Error::DimensionMismatch {
            expected: rho.dim,
            found: total,
        });
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch {
            expected: dims.len(),
            found: bad + 1,
        });
    }
    let kept: Vec<usize> = (0..dims.len()).filter(|k| keep.contains(k)).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kept_dim: usize = kept.iter().map(|&k| dims[k]).product();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

    // Strides of each subsystem in the full row-major index.
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let full_index = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut idx = 0;
        let mut rem = kept_idx;
        for &k in kept.iter().rev() {
            idx += (rem % dims[k]) * strides[k];
            rem /= dims[k];
        }
        let mut rem = traced_idx;
        for &k in traced.iter().rev() {
            idx += (rem % dims[k]) * strides[k];
            rem /= dims[k];
        }
        idx
    };

    let mut out = Matrix::zeros(kept_dim);
    for i in 0..kept_dim {
        for j in 0..kept_dim {
            let mut acc = Complex::zero();
            for t in 0..traced_dim {
                acc += rho[(full_index(i, t), full_index(j, t))];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// One of the two qubits of a two-qubit operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Qubit {
    A,
    B,
}

/// Partial transpose of a 4x4 operator over one qubit.
pub fn partial_transpose<T: Real>(rho: &Matrix<T>, qubit: Qubit) -> Result<Matrix<T>> {
    if rho.dim != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim,
        });
    }
    Ok(Matrix::from_fn(4, |i, j| {
        let (ia, ib) = (i / 2, i % 2);
        let (ja, jb) = (j / 2, j % 2);
        match qubit {
            Qubit::A => rho[(ja * 2 + ib, ia * 2 + jb)],
            Qubit::B => rho[(ia * 2 + jb, ja * 2 + ib)],
        }
    }))
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The `n x n` Hermitian `H = A + iB` is embedded into the real symmetric
/// `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every eigenvalue
/// doubled; the embedding is diagonalized by cyclic Jacobi rotations.
pub fn hermitian_eigenvalues<T: Real>(h: &Matrix<T>) -> Result<Vec<T>> {
    let n = h.dim;
    let scale = h.frobenius_norm().max(T::one());
    let deviation = h.hermitian_deviation();
    if deviation > tol::<T>(HERMITIAN_TOL) * scale {
        return Err(Error::NotHermitian {
            deviation: to_f64(deviation),
        });
    }
    let h = h.hermitian_part();
    let m = 2 * n;
    let mut a = vec![T::zero(); m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let mut doubled = jacobi_symmetric_eigenvalues(&mut a, m);
    doubled.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(doubled
        .chunks(2)
        .map(|pair| (pair[0] + pair[1]) * lit(0.5))
        .collect())
}

fn jacobi_symmetric_eigenvalues<T: Real>(a: &mut [T], m: usize) -> Vec<T> {
    let off = |a: &[T]| -> T {
        let mut s = T::zero();
        for i in 0..m {
            for j in (i + 1)..m {
                s += a[i * m + j] * a[i * m + j];
            }
        }
        s
    };
    let total: T = a.iter().map(|x| *x * *x).sum();
    let threshold = T::epsilon() * T::epsilon() * total.max(T::min_positive_value());
    for _sweep in 0..100 {
        if off(a) <= threshold {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let theta = (aqq - app) / (lit::<T>(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let t = if theta == T::zero() { T::one() } else { t };
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = cs * akp - sn * akq;
                    a[k * m + q] = sn * akp + cs * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = cs * apk - sn * aqk;
                    a[q * m + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i * m + i]).collect()
}

/// Trace distance `||A - B||_1 / 2` of two Hermitian operators.
pub fn trace_distance<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    let eig = hermitian_eigenvalues(&(a - b))?;
    Ok(eig.into_iter().map(T::abs).sum::<T>() * lit(0.5))
}

/// Real 3-vector; used for measurement directions and hidden variables.
#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> BlochVector<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    /// Checked unit direction.
    pub fn unit(x: T, y: T, z: T) -> Result<Self> {
        let v = Self::new(x, y, z);
        v.ensure_unit()?;
        Ok(v)
    }

    pub fn ex() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn ey() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn ez() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    /// Unit vector from polar and azimuthal angles.
    pub fn from_angles(theta: T, phi: T) -> Self {
        let s = theta.sin();
        Self::new(s * phi.cos(), s * phi.sin(), theta.cos())
    }

    pub fn ensure_unit(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - T::one()).abs() > tol::<T>(UNIT_TOL) {
            return Err(Error::NotUnitVector { norm: to_f64(norm) });
        }
        Ok(())
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    /// `self / |self|`; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() {
            Some(self.scaled(T::one() / n))
        } else {
            None
        }
    }

    pub fn to_array(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    /// `v . sigma`.
    pub fn dot_sigma(&self) -> Matrix<T> {
        let z = |re: T, im: T| Complex::new(re, im);
        Matrix::from_rows(&[
            vec![z(self.z, T::zero()), z(self.x, -self.y)],
            vec![z(self.x, self.y), z(-self.z, T::zero())],
        ])
        .expect("2x2 rows")
    }

    pub fn cast<U: Real>(&self) -> BlochVector<U> {
        BlochVector::new(
            U::from_f64(to_f64(self.x)).unwrap_or(U::nan()),
            U::from_f64(to_f64(self.y)).unwrap_or(U::nan()),
            U::from_f64(to_f64(self.z)).unwrap_or(U::nan()),
        )
    }
}

impl<T: Real> Neg for BlochVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Add for BlochVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for BlochVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

/// Measurement outcome `a = +-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign<T: Real>(self) -> T {
        match self {
            Outcome::Plus => T::one(),
            Outcome::Minus => -T::one(),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_sign(s: i8) -> Option<Self> {
        match s {
            1 => Some(Outcome::Plus),
            -1 => Some(Outcome::Minus),
            _ => None,
        }
    }
}

/// Unit-trace Hermitian operator of dimension 2, 4 or 8.
///
/// Positivity is not enforced: pseudo-states are needed when symmetrizing.
/// Use [`DensityOperator::is_physical`] to check it.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T> {
    matrix: Matrix<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Validates Hermiticity and unit trace, then removes the Hermitian drift.
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        if !matches!(matrix.dim(), 2 | 4 | 8) {
            return Err(Error::DimensionMismatch {
                expected: 8,
                found: matrix.dim(),
            });
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > tol::<T>(HERMITIAN_TOL) {
            return Err(Error::NotHermitian {
                deviation: to_f64(deviation),
            });
        }
        let trace = matrix.trace();
        if (trace.re - T::one()).abs() > tol::<T>(TRACE_TOL) || trace.im.abs() > tol::<T>(TRACE_TOL) {
            return Err(Error::TraceNotUnit {
                trace: to_f64(trace.re),
            });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Like [`DensityOperator::new`] but also requires positivity.
    pub fn physical(matrix: Matrix<T>) -> Result<Self> {
        let rho = Self::new(matrix)?;
        let min = rho.min_eigenvalue();
        if min < -tol::<T>(POSITIVITY_TOL) {
            return Err(Error::NotPositive {
                min_eigenvalue: to_f64(min),
            });
        }
        Ok(rho)
    }

    /// Maximally mixed state `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: Matrix::identity(dim).scale(T::one() / from_usize(dim)),
        }
    }

    /// Pure state `|psi><psi|` of a normalized vector.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        Self::new(Matrix::outer(psi))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix).expect("density operators are Hermitian")
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()[0]
    }

    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue() >= -tol::<T>(POSITIVITY_TOL)
    }

    /// `Re Tr(rho * E)` for a Hermitian effect `E`.
    pub fn probability(&self, effect: &Matrix<T>) -> T {
        self.matrix.trace_product_re(effect)
    }

    pub fn trace_distance(&self, other: &Self) -> T {
        trace_distance(&self.matrix, &other.matrix).expect("density operators are Hermitian")
    }
}

/// Projector `(I + a x.sigma) / 2` onto outcome `a` along unit direction `x`.
pub fn projector<T: Real>(x: &BlochVector<T>, a: Outcome) -> Result<DensityOperator<T>> {
    x.ensure_unit()?;
    Ok(DensityOperator {
        matrix: projector_unchecked(x, a),
    })
}

/// Projector without the unit-norm check; used in hot loops.
pub(crate) fn projector_unchecked<T: Real>(x: &BlochVector<T>, a: Outcome) -> Matrix<T> {
    let mut m = x.dot_sigma().scale(a.sign());
    m.add_scaled(T::one(), &Matrix::identity(2));
    m.scale(lit(0.5))
}

/// Computational basis vector `|index>` in dimension `dim`.
pub fn basis_vector<T: Real>(dim: usize, index: usize) -> Vec<Complex<T>> {
    let mut v = vec![Complex::zero(); dim];
    v[index] = Complex::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn r(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    fn phi_plus() -> Vec<Complex<f64>> {
        let s = 0.5f64.sqrt();
        vec![r(s), r(0.0), r(0.0), r(s)]
    }

    #[test]
    fn kron_identities() {
        let i4 = kron(&Matrix::<f64>::identity(2), &Matrix::identity(2));
        assert_eq!(i4, Matrix::identity(4));
        let zz = kron(&pauli_z::<f64>(), &pauli_z());
        assert_eq!(zz, Matrix::from_real_diagonal(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn kron_expansion_reproduces_bell_projector() {
        // |phi+><phi+| = (II + XX - YY + ZZ) / 4
        let [x, y, z] = paulis::<f64>();
        let mut m = Matrix::identity(4);
        m.add_scaled(1.0, &kron(&x, &x));
        m.add_scaled(-1.0, &kron(&y, &y));
        m.add_scaled(1.0, &kron(&z, &z));
        let m = m.scale(0.25);
        assert!(m.max_abs_diff(&Matrix::outer(&phi_plus())) < 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let bell = Matrix::outer(&phi_plus());
        let b = partial_trace(&bell, &[2, 2], &[1]).unwrap();
        assert!(b.max_abs_diff(&Matrix::identity(2).scale(0.5)) < 1e-15);

        let mixed = Matrix::<f64>::identity(8).scale(0.125);
        let bc = partial_trace(&mixed, &[2, 2, 2], &[1, 2]).unwrap();
        assert!(bc.max_abs_diff(&Matrix::identity(4).scale(0.25)) < 1e-15);

        assert!(matches!(
            partial_trace(&mixed, &[2, 2], &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_picks_the_right_factor() {
        let a = pauli_x::<f64>();
        let b = Matrix::from_real_diagonal(&[0.3, 0.7]);
        let c = pauli_z::<f64>();
        let abc = kron_all(&[&a, &b, &c]);
        let kept = partial_trace(&abc, &[2, 2, 2], &[1]).unwrap();
        // Tr(X) = Tr(Z) = 0, so use a traceful third factor instead.
        assert!(kept.max_abs_diff(&Matrix::zeros(2)) < 1e-15);
        let abd = kron_all(&[&Matrix::identity(2), &b, &Matrix::identity(2)]);
        let kept = partial_trace(&abd, &[2, 2, 2], &[1]).unwrap();
        assert!(kept.max_abs_diff(&b.scale(4.0)) < 1e-15);
        let ac = partial_trace(&kron_all(&[&a, &Matrix::identity(2), &c]), &[2, 2, 2], &[0, 2]).unwrap();
        assert!(ac.max_abs_diff(&kron(&a, &c).scale(2.0)) < 1e-15);
    }

    #[test]
    fn partial_transpose_examples() {
        let mixed = Matrix::<f64>::identity(4).scale(0.25);
        assert_eq!(partial_transpose(&mixed, Qubit::A).unwrap(), mixed);

        let bell = Matrix::outer(&phi_plus());
        for q in [Qubit::A, Qubit::B] {
            let pt = partial_transpose(&bell, q).unwrap();
            let eig = hermitian_eigenvalues(&pt).unwrap();
            assert_abs_diff_eq!(eig[0], -0.5, epsilon = 1e-12);
        }

        let up = projector_unchecked(&BlochVector::<f64>::unit(0.6, 0.0, 0.8).unwrap(), Outcome::Plus);
        let other = projector_unchecked(&BlochVector::<f64>::ey(), Outcome::Minus);
        let product = kron(&up, &other);
        let eig = hermitian_eigenvalues(&partial_transpose(&product, Qubit::B).unwrap()).unwrap();
        assert!(eig[0] >= -1e-12);

        assert!(partial_transpose(&Matrix::<f64>::identity(2), Qubit::A).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let e = hermitian_eigenvalues(&pauli_z::<f64>()).unwrap();
        assert_abs_diff_eq!(e[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e[1], 1.0, epsilon = 1e-14);

        let e = hermitian_eigenvalues(&Matrix::<f64>::identity(8).scale(0.125)).unwrap();
        for v in e {
            assert_abs_diff_eq!(v, 0.125, epsilon = 1e-14);
        }

        let e = hermitian_eigenvalues(&pauli_y::<f64>()).unwrap();
        assert_abs_diff_eq!(e[0], -1.0, epsilon = 1e-14);

        let mut bad = Matrix::<f64>::zeros(2);
        bad[(0, 1)] = r(1.0);
        assert!(matches!(hermitian_eigenvalues(&bad), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigenvalues_of_complex_hermitian_match_closed_form() {
        // [[a, b - ic], [b + ic, d]] has eigenvalues (a+d)/2 +- sqrt(((a-d)/2)^2 + b^2 + c^2)
        let (a, b, cc, d) = (0.3, -0.7, 0.4, 1.1);
        let m = Matrix::from_rows(&[
            vec![r(a), Complex::new(b, -cc)],
            vec![Complex::new(b, cc), r(d)],
        ])
        .unwrap();
        let e = hermitian_eigenvalues(&m).unwrap();
        let rad = (((a - d) / 2.0f64).powi(2) + b * b + cc * cc).sqrt();
        assert_abs_diff_eq!(e[0], (a + d) / 2.0 - rad, epsilon = 1e-13);
        assert_abs_diff_eq!(e[1], (a + d) / 2.0 + rad, epsilon = 1e-13);
    }

    #[test]
    fn projector_examples() {
        let up = projector(&BlochVector::<f64>::ez(), Outcome::Plus).unwrap();
        assert!(up.matrix().max_abs_diff(&Matrix::from_real_diagonal(&[1.0, 0.0])) < 1e-15);

        let minus = projector(&BlochVector::<f64>::ex(), Outcome::Minus).unwrap();
        let s = 0.5f64.sqrt();
        let expected = Matrix::outer(&[r(s), r(-s)]);
        assert!(minus.matrix().max_abs_diff(&expected) < 1e-15);

        assert!(matches!(
            projector(&BlochVector::new(1.0, 1.0, 0.0), Outcome::Plus),
            Err(Error::NotUnitVector { .. })
        ));
    }

    #[test]
    fn density_operator_validation() {
        assert!(matches!(
            DensityOperator::new(Matrix::<f64>::identity(2)),
            Err(Error::TraceNotUnit { .. })
        ));
        assert!(matches!(
            DensityOperator::new(Matrix::<f64>::identity(3).scale(1.0 / 3.0)),
            Err(Error::DimensionMismatch { .. })
        ));
        let pseudo = Matrix::from_real_diagonal(&[1.5, -0.5]);
        let rho = DensityOperator::new(pseudo.clone()).unwrap();
        assert!(!rho.is_physical());
        assert!(matches!(DensityOperator::physical(pseudo), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn works_in_single_precision() {
        let e = hermitian_eigenvalues(&pauli_x::<f32>()).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-5 && (e[1] - 1.0).abs() < 1e-5);
        let rho = DensityOperator::<f32>::maximally_mixed(4);
        assert!(rho.is_physical());
    }
}
