//! Two- and three-qubit GHZ-symmetric states.
//!
//! Both families are triangles in a `(p, q)` plane. The two-qubit family is
//! spanned by the Bell states `|phi+->` and the identity, the three-qubit
//! family by `|G+->` = `(|000> +- |111>)/sqrt 2` and the identity.

mod classify;
mod measures;
mod symmetrize;

pub use classify::{
    bisep_w_boundary_p, classify, separable_boundary_p, triangle_edge_p, wghz_boundary,
    wghz_boundary_p, wghz_parameter_of_q, EntanglementClass, WGHZ_Q_RANGE,
};
pub use measures::{concurrences, three_tangle, Concurrences};
pub use symmetrize::{symmetrize_coords, symmetrize_oracle, GhzSymmetryGroup};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, paulis, BlochVector, DensityOperator, Matrix};
use crate::scalar::{lit, sqrt2, sqrt3, tol, to_f64, Real};

/// Slack allowed on the triangle inequalities.
pub const TRIANGLE_TOL: f64 = 1e-12;

/// Coordinates of a two-qubit GHZ-symmetric state.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct TwoQubitGhzPoint<T> {
    pub p: T,
    pub q: T,
}

impl<T: Real> TwoQubitGhzPoint<T> {
    /// Checked point inside the two-qubit triangle.
    pub fn new(p: T, q: T) -> Result<Self> {
        let pt = Self { p, q };
        pt.validate()?;
        Ok(pt)
    }

    pub fn validate(&self) -> Result<()> {
        let slack = tol::<T>(TRIANGLE_TOL);
        let bound = T::one() / (lit::<T>(2.0) * sqrt2());
        let violated = if !(self.p.is_finite() && self.q.is_finite()) {
            Some("finite coordinates")
        } else if self.q < -bound - slack {
            Some("q >= -1/(2 sqrt 2)")
        } else if self.q > bound + slack {
            Some("q <= 1/(2 sqrt 2)")
        } else if self.q / sqrt2() + self.p + lit(0.25) < -slack {
            Some("q/sqrt 2 + p + 1/4 >= 0")
        } else if self.q / sqrt2() - self.p + lit(0.25) < -slack {
            Some("q/sqrt 2 - p + 1/4 >= 0")
        } else {
            None
        };
        match violated {
            Some(constraint) => Err(Error::OutsideTriangle {
                p: to_f64(self.p),
                q: to_f64(self.q),
                family: "two-qubit",
                constraint,
            }),
            None => Ok(()),
        }
    }

    /// Spin correlations `Diag[2p, -2p, 2 sqrt2 q]`.
    pub fn correlations(&self) -> CorrelationMatrix<T> {
        let two = lit::<T>(2.0);
        CorrelationMatrix::new(two * self.p, -two * self.p, two * sqrt2::<T>() * self.q)
    }

    /// Inside the separable region `q <= 1/(2 sqrt2) - sqrt2 |p|`.
    pub fn is_separable(&self) -> bool {
        self.q <= two_qubit_separable_q(self.p) + tol::<T>(TRIANGLE_TOL)
    }
}

/// Upper edge `q = 1/(2 sqrt2) - sqrt2 |p|` of the two-qubit separable region.
pub fn two_qubit_separable_q<T: Real>(p: T) -> T {
    T::one() / (lit::<T>(2.0) * sqrt2()) - sqrt2::<T>() * p.abs()
}

/// Coordinates of a three-qubit GHZ-symmetric state.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ThreeQubitGhzPoint<T> {
    pub p: T,
    pub q: T,
}

impl<T: Real> ThreeQubitGhzPoint<T> {
    /// Checked point inside the three-qubit triangle.
    pub fn new(p: T, q: T) -> Result<Self> {
        let pt = Self { p, q };
        pt.validate()?;
        Ok(pt)
    }

    /// Name of the first violated triangle constraint, if any.
    pub fn violated_constraint(&self) -> Option<&'static str> {
        let slack = tol::<T>(TRIANGLE_TOL);
        if !(self.p.is_finite() && self.q.is_finite()) {
            Some("finite coordinates")
        } else if self.q < -T::one() / (lit::<T>(4.0) * sqrt3()) - slack {
            Some("q >= -1/(4 sqrt 3)")
        } else if self.q > sqrt3::<T>() / lit(4.0) + slack {
            Some("q <= sqrt 3/4")
        } else if self.p.abs() > triangle_edge_p(self.q) + slack {
            Some("|p| <= 1/8 + (sqrt 3/2) q")
        } else {
            None
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.violated_constraint() {
            Some(constraint) => Err(Error::OutsideTriangle {
                p: to_f64(self.p),
                q: to_f64(self.q),
                family: "three-qubit",
                constraint,
            }),
            None => Ok(()),
        }
    }

    /// `|G+>` corner.
    pub fn ghz_plus() -> Self {
        Self {
            p: lit(0.5),
            q: sqrt3::<T>() / lit(4.0),
        }
    }

    pub fn mirrored(&self) -> Self {
        Self { p: -self.p, q: self.q }
    }
}

/// Diagonal spin-correlation matrix `Diag[Tx, Ty, Tz]`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct CorrelationMatrix<T> {
    pub tx: T,
    pub ty: T,
    pub tz: T,
}

impl<T: Real> CorrelationMatrix<T> {
    pub const fn new(tx: T, ty: T, tz: T) -> Self {
        Self { tx, ty, tz }
    }

    /// `s * Diag[1, -1, w]`, the GHZ-symmetric slice with slope `w = Tz/Tx`.
    pub fn ghz_slice(scale: T, w: T) -> Self {
        Self::new(scale, -scale, scale * w)
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn apply(&self, v: &BlochVector<T>) -> BlochVector<T> {
        BlochVector::new(self.tx * v.x, self.ty * v.y, self.tz * v.z)
    }

    pub fn scaled(&self, s: T) -> Self {
        Self::new(self.tx * s, self.ty * s, self.tz * s)
    }

    pub fn diagonal(&self) -> [T; 3] {
        [self.tx, self.ty, self.tz]
    }

    /// Two-qubit GHZ-symmetric coordinates; requires `Tx = -Ty`.
    pub fn to_two_qubit_point(&self) -> Result<TwoQubitGhzPoint<T>> {
        let slack = tol::<T>(TRIANGLE_TOL);
        if (self.tx + self.ty).abs() > slack {
            return Err(Error::OutOfDomain {
                name: "Tx + Ty",
                value: to_f64(self.tx + self.ty),
                domain: "{0} (GHZ-symmetric slice)",
            });
        }
        Ok(TwoQubitGhzPoint {
            p: self.tx * lit(0.5),
            q: self.tz / (lit::<T>(2.0) * sqrt2()),
        })
    }

    /// Bell-diagonal operator `(I + sum_k T_k sigma_k (x) sigma_k) / 4`.
    pub fn bell_diagonal_operator(&self) -> Matrix<T> {
        let s = paulis::<T>();
        let mut m = Matrix::identity(4);
        for (t, sk) in self.diagonal().into_iter().zip(&s) {
            m.add_scaled(t, &kron(sk, sk));
        }
        m.scale(lit(0.25))
    }

    /// The Bell-diagonal state; errors when it is not positive.
    pub fn bell_diagonal_state(&self) -> Result<DensityOperator<T>> {
        DensityOperator::physical(self.bell_diagonal_operator())
    }
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `(|00> + s |11>) / sqrt 2` for `s = +-1`.
pub fn bell_phi<T: Real>(sign: T) -> Vec<Complex<T>> {
    let h = T::FRAC_1_SQRT_2();
    vec![real(h), real(T::zero()), real(T::zero()), real(sign * h)]
}

/// `(|000> + s |111>) / sqrt 2` for `s = +-1`.
pub fn ghz_vector<T: Real>(sign: T) -> Vec<Complex<T>> {
    let mut v = vec![real(T::zero()); 8];
    v[0] = real(T::FRAC_1_SQRT_2());
    v[7] = real(sign * T::FRAC_1_SQRT_2());
    v
}

/// Two-qubit GHZ-symmetric state
/// `(sqrt2 q + p) phi+ + (sqrt2 q - p) phi- + (1 - 2 sqrt2 q) I/4`.
pub fn two_qubit_density<T: Real>(pt: &TwoQubitGhzPoint<T>) -> Result<DensityOperator<T>> {
    pt.validate()?;
    DensityOperator::new(two_qubit_operator(pt.p, pt.q))
}

/// Unchecked operator behind [`two_qubit_density`].
pub fn two_qubit_operator<T: Real>(p: T, q: T) -> Matrix<T> {
    let r2q = sqrt2::<T>() * q;
    let mut m = Matrix::identity(4).scale((T::one() - lit::<T>(2.0) * r2q) * lit(0.25));
    m.add_scaled(r2q + p, &Matrix::outer(&bell_phi(T::one())));
    m.add_scaled(r2q - p, &Matrix::outer(&bell_phi(-T::one())));
    m
}

/// Three-qubit GHZ-symmetric state
/// `(2q/sqrt3 + p) G+ + (2q/sqrt3 - p) G- + (1 - 4q/sqrt3) I/8`.
pub fn three_qubit_density<T: Real>(pt: &ThreeQubitGhzPoint<T>) -> Result<DensityOperator<T>> {
    pt.validate()?;
    DensityOperator::new(three_qubit_operator(pt.p, pt.q))
}

/// Unchecked operator behind [`three_qubit_density`]; also valid for
/// coordinates outside the triangle.
pub fn three_qubit_operator<T: Real>(p: T, q: T) -> Matrix<T> {
    let a = lit::<T>(2.0) * q / sqrt3();
    let mut m = Matrix::identity(8).scale((T::one() - lit::<T>(2.0) * a) / lit(8.0));
    m.add_scaled(a + p, &Matrix::outer(&ghz_vector(T::one())));
    m.add_scaled(a - p, &Matrix::outer(&ghz_vector(-T::one())));
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_qubit_examples() {
        let origin = two_qubit_density(&TwoQubitGhzPoint::new(0.0, 0.0).unwrap()).unwrap();
        assert!(origin.matrix().max_abs_diff(&Matrix::identity(4).scale(0.25)) < 1e-15);

        let corner = TwoQubitGhzPoint::new(0.5, 1.0 / (2.0 * 2f64.sqrt())).unwrap();
        let rho = two_qubit_density(&corner).unwrap();
        assert!(rho.matrix().max_abs_diff(&Matrix::outer(&bell_phi(1.0))) < 1e-15);
    }

    #[test]
    fn two_qubit_correlations_match_bell_diagonal_form() {
        let pt = TwoQubitGhzPoint::new(0.1, 0.15).unwrap();
        let t = pt.correlations();
        assert_abs_diff_eq!(t.tx, 0.2);
        assert_abs_diff_eq!(t.ty, -0.2);
        assert_abs_diff_eq!(t.tz, 0.3 * 2f64.sqrt(), epsilon = 1e-15);
        let rho = two_qubit_density(&pt).unwrap();
        assert!(rho.matrix().max_abs_diff(&t.bell_diagonal_operator()) < 1e-15);
        for (k, s) in paulis::<f64>().iter().enumerate() {
            let corr = rho.probability(&kron(s, s));
            assert_abs_diff_eq!(corr, t.diagonal()[k], epsilon = 1e-14);
        }
        assert_eq!(t.to_two_qubit_point().unwrap(), pt);
    }

    #[test]
    fn two_qubit_eigenvalues_in_bell_basis() {
        let (p, q) = (0.12, 0.2);
        let rho = two_qubit_density(&TwoQubitGhzPoint::new(p, q).unwrap()).unwrap();
        let r2 = 2f64.sqrt();
        let mut expected = vec![
            0.25 + q / r2 + p,
            0.25 + q / r2 - p,
            (1.0 - 2.0 * r2 * q) / 4.0,
            (1.0 - 2.0 * r2 * q) / 4.0,
        ];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let got = hermitian_eigenvalues(rho.matrix()).unwrap();
        for (g, e) in got.iter().zip(&expected) {
            assert_abs_diff_eq!(g, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn triangle_violations_are_named() {
        let err = TwoQubitGhzPoint::new(0.6, 0.3).unwrap_err();
        assert!(err.to_string().contains("q/sqrt 2 - p + 1/4"), "{err}");
        let err = ThreeQubitGhzPoint::new(0.0, 0.5).unwrap_err();
        assert!(err.to_string().contains("q <= sqrt 3/4"), "{err}");
        let err = ThreeQubitGhzPoint::new(0.3, 0.0).unwrap_err();
        assert!(err.to_string().contains("|p|"), "{err}");
    }

    #[test]
    fn three_qubit_examples() {
        let origin = three_qubit_density(&ThreeQubitGhzPoint::new(0.0, 0.0).unwrap()).unwrap();
        assert!(origin.matrix().max_abs_diff(&Matrix::identity(8).scale(0.125)) < 1e-15);

        let plus = three_qubit_density(&ThreeQubitGhzPoint::ghz_plus()).unwrap();
        assert!(plus.matrix().max_abs_diff(&Matrix::outer(&ghz_vector(1.0))) < 1e-15);

        let minus = three_qubit_density(&ThreeQubitGhzPoint::ghz_plus().mirrored()).unwrap();
        assert!(minus.matrix().max_abs_diff(&Matrix::outer(&ghz_vector(-1.0))) < 1e-15);
    }

    #[test]
    fn triangle_states_are_positive() {
        let r3 = 3f64.sqrt();
        for i in 0..=10 {
            let q = -1.0 / (4.0 * r3) + (r3 / 4.0 + 1.0 / (4.0 * r3)) * i as f64 / 10.0;
            let edge = triangle_edge_p(q);
            for p in [-edge, 0.0, 0.5 * edge, edge] {
                let rho = three_qubit_density(&ThreeQubitGhzPoint::new(p, q).unwrap()).unwrap();
                assert!(rho.is_physical(), "({p}, {q})");
            }
        }
    }
}
