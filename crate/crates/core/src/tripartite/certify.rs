//! Locality certificates for the hidden states of the fully local model.
//!
//! Separable-branch states are checked by partial transposition and come
//! with an explicit product decomposition. Unsteerable-branch states are
//! mapped by the local filter `M = diag(e^{i phi''} sin(theta''/2), cos(theta''/2))`
//! onto the two-qubit boundary state at `w_c`; pulling Bob's measurement
//! back through `M` turns that state's LHS model into a local model of the
//! hidden state itself.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::fully_local::{Branch, FullyLocalModel, HiddenPoint};
use super::pair_probabilities;
use crate::error::{Error, Result};
use crate::ghz::{two_qubit_density, TwoQubitGhzPoint};
use crate::linalg::{
    hermitian_eigenvalues, kron, partial_transpose, projector_unchecked, BlochVector, DensityOperator, Matrix,
    Outcome, Qubit, POSITIVITY_TOL,
};
use crate::numerics::SplitSphereQuadrature;
use crate::scalar::{from_usize, lit, sgn, to_f64, Real};
use crate::steering::{boundary_p_of_w, critical_slope, hidden_bloch};

/// Largest accepted distance between a filtered hidden state and the boundary state.
pub const FILTER_TOL: f64 = 1e-8;

/// Phases used by the separable decomposition; three already integrate it exactly.
const DECOMPOSITION_POINTS: usize = 4;

/// `M = e^{i phi} sin(theta/2) |0><0| + cos(theta/2) |1><1|`.
pub fn filter_map<T: Real>(theta: T, phi: T) -> Matrix<T> {
    let (s, c) = (theta * lit(0.5)).sin_cos();
    let mut m = Matrix::zeros(2);
    m[(0, 0)] = Complex::from_polar(s, phi);
    m[(1, 1)] = Complex::new(c, T::zero());
    m
}

/// `(M (x) I) rho (M (x) I)^dagger`, normalized.
pub fn filtered_state<T: Real>(rho: &DensityOperator<T>, theta: T, phi: T) -> Result<DensityOperator<T>> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let m = kron(&filter_map(theta, phi), &Matrix::identity(2));
    let out = rho.matrix().conjugate_by(&m);
    let tr = out.trace().re;
    DensityOperator::new(out.scale(T::one() / tr))
}

/// Two-qubit GHZ-symmetric state where the steering boundary meets the triangle side.
pub fn critical_boundary_point<T: Real>() -> TwoQubitGhzPoint<T> {
    boundary_p_of_w(critical_slope::<T>())
        .expect("w_c is nonzero")
        .two_qubit_point()
}

/// Weight and the two single-qubit kets of one product term.
pub type ProductTerm<T> = (T, [Complex<T>; 2], [Complex<T>; 2]);

/// Product decomposition `sum_k w_k |alpha_k><alpha_k| (x) |beta_k><beta_k|` of
/// `[|psi><psi| + sin(theta) (|01><01| + |10><10|) / 2] / (1 + sin theta)`,
/// `psi = cos(theta/2) |00> + e^{i phi} sin(theta/2) |11>`.
pub fn separable_decomposition<T: Real>(theta: T, phi: T) -> Vec<ProductTerm<T>> {
    let (b, a) = (theta * lit(0.5)).sin_cos();
    let (ra, rb) = (a.max(T::zero()).sqrt(), b.max(T::zero()).sqrt());
    let norm = T::one() / (a + b).sqrt();
    let w = T::one() / from_usize(DECOMPOSITION_POINTS);
    (0..DECOMPOSITION_POINTS)
        .map(|k| {
            let mu = T::TAU() * from_usize(k) * w;
            let re = |x: T| Complex::new(x * norm, T::zero());
            let alpha = [re(ra), Complex::from_polar(rb * norm, mu)];
            let beta = [re(ra), Complex::from_polar(rb * norm, phi - mu)];
            (w, alpha, beta)
        })
        .collect()
}

fn qubit_probability<T: Real>(psi: &[Complex<T>; 2], n: &BlochVector<T>, o: Outcome) -> T {
    projector_unchecked(n, o).expectation(psi).re
}

/// `P_BC(b, c | y, z)` of the separable branch from its product decomposition.
pub fn branch1_mu_joint<T: Real>(theta: T, phi: T, y: &BlochVector<T>, z: &BlochVector<T>) -> [[T; 2]; 2] {
    let mut out = [[T::zero(); 2]; 2];
    for (w, alpha, beta) in separable_decomposition(theta, phi) {
        for b in Outcome::ALL {
            let pb = qubit_probability(&alpha, y, b);
            for c in Outcome::ALL {
                out[b.index()][c.index()] += w * pb * qubit_probability(&beta, z, c);
            }
        }
    }
    out
}

/// `P_BC(b, c | y, z)` of the unsteerable branch from the filter pull-back.
///
/// With `rho = N (M^-1 (x) I) sigma_c (M^-1 (x) I)^dagger`, `sigma_c` the
/// boundary state at `w_c`, the hidden variable `mu` of the LHS model of
/// `sigma_c` (C answers `sgn(z . mu)`, B holds `rho_mu`) is redistributed by
/// `tau(mu) = omega(mu) Tr(E rho_mu)` with `E_b = N M^-1 dagger Pi_b^y M^-1`
/// and `E = sum_b E_b`, and B answers `Tr(E_b rho_mu) / Tr(E rho_mu)`.
pub fn branch2_mu_joint<T: Real>(
    theta: T,
    phi: T,
    y: &BlochVector<T>,
    z: &BlochVector<T>,
    quad: &SplitSphereQuadrature<T>,
) -> [[T; 2]; 2] {
    let (s, c) = (theta * lit(0.5)).sin_cos();
    let scale = lit::<T>(2.0) * s * s * c * c;
    let mut m_inv = Matrix::zeros(2);
    m_inv[(0, 0)] = Complex::from_polar(T::one() / s, -phi);
    m_inv[(1, 1)] = Complex::new(T::one() / c, T::zero());
    let effects = Outcome::ALL.map(|b| {
        let e = (&(&m_inv.adjoint() * &projector_unchecked(y, b)) * &m_inv).scale(scale);
        // Tr(E rho_n) = (e0 + e . n) / 2
        let e0 = e.trace().re;
        let [px, py, pz] = crate::linalg::paulis::<T>();
        let ev = BlochVector::new(e.trace_product_re(&px), e.trace_product_re(&py), e.trace_product_re(&pz));
        (e0, ev)
    });
    let t_c = critical_boundary_point::<T>().correlations();

    let mut out = [[T::zero(); 2]; 2];
    quad.visit(z, z, &[], |mu, w, _| {
        let Some((omega, n)) = hidden_bloch(&t_c, mu) else {
            return;
        };
        let tr = effects.map(|(e0, ev)| (e0 + ev.dot(&n)) * lit(0.5));
        let total = tr[0] + tr[1];
        let tau = omega * total;
        let side = sgn(z.dot(mu));
        for b in Outcome::ALL {
            let p_b = tr[b.index()] / total;
            for cc in Outcome::ALL {
                let p_c = (T::one() + cc.sign::<T>() * side) * lit(0.5);
                out[b.index()][cc.index()] += w * tau * p_b * p_c;
            }
        }
    });
    out
}

/// Evidence that one hidden state admits a local model.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Certificate<T> {
    pub branch: Branch,
    /// Smallest eigenvalue of the partial transpose (separable branch).
    pub ppt_min_eigenvalue: Option<T>,
    /// Largest entry difference between the filtered state and the boundary state.
    pub filter_distance: Option<T>,
    /// Largest gap between the explicit local model and `Tr(Pi (x) Pi rho)`.
    pub mu_deviation: T,
    pub certified: bool,
}

/// Certifies `rho_lambda^BC` of `model`; `probes` are the `(y, z)` pairs on
/// which the explicit local model is compared with the quantum prediction.
pub fn certify_hidden_state<T: Real>(
    model: &FullyLocalModel<T>,
    lambda: &BlochVector<T>,
    probes: &[(BlochVector<T>, BlochVector<T>)],
    mu_quad: &SplitSphereQuadrature<T>,
) -> Result<Certificate<T>> {
    let (branch, rho) = model.hidden_state(lambda)?;
    let params = model.params();
    let (theta, phi) = HiddenPoint::new(&params.corr, params.c, lambda)
        .ok_or(Error::DegenerateDirection)?
        .angles();

    let mut mu_deviation = T::zero();
    for (y, z) in probes {
        let quantum = pair_probabilities(rho.matrix(), y, z);
        let local = match branch {
            Branch::Separable => branch1_mu_joint(theta, phi, y, z),
            Branch::Unsteerable => branch2_mu_joint(theta, phi, y, z, mu_quad),
        };
        for b in 0..2 {
            for c in 0..2 {
                mu_deviation = mu_deviation.max((quantum[b][c] - local[b][c]).abs());
            }
        }
    }

    let cert = match branch {
        Branch::Separable => {
            let pt = partial_transpose(rho.matrix(), Qubit::B)?;
            let min = hermitian_eigenvalues(&pt)?[0];
            Certificate {
                branch,
                ppt_min_eigenvalue: Some(min),
                filter_distance: None,
                mu_deviation,
                certified: min >= -lit::<T>(POSITIVITY_TOL),
            }
        }
        Branch::Unsteerable => {
            let filtered = filtered_state(&rho, theta, phi)?;
            let target = two_qubit_density(&critical_boundary_point())?;
            let d = filtered.matrix().max_abs_diff(target.matrix());
            Certificate {
                branch,
                ppt_min_eigenvalue: None,
                filter_distance: Some(d),
                mu_deviation,
                certified: d <= lit(FILTER_TOL),
            }
        }
    };
    Ok(cert)
}

/// Tally of a certification sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificationCounts {
    pub sampled: usize,
    pub separable_branch: usize,
    pub ppt_passes: usize,
    pub unsteerable_branch: usize,
    pub filter_passes: usize,
    pub worst_ppt_eigenvalue: f64,
    pub worst_filter_distance: f64,
    pub worst_mu_deviation: f64,
}

impl CertificationCounts {
    pub fn record<T: Real>(&mut self, cert: &Certificate<T>) {
        self.sampled += 1;
        self.worst_mu_deviation = self.worst_mu_deviation.max(to_f64(cert.mu_deviation));
        match cert.branch {
            Branch::Separable => {
                self.separable_branch += 1;
                self.ppt_passes += usize::from(cert.certified);
                let e = cert.ppt_min_eigenvalue.map(to_f64).unwrap_or(0.0);
                self.worst_ppt_eigenvalue = self.worst_ppt_eigenvalue.min(e);
            }
            Branch::Unsteerable => {
                self.unsteerable_branch += 1;
                self.filter_passes += usize::from(cert.certified);
                let d = cert.filter_distance.map(to_f64).unwrap_or(0.0);
                self.worst_filter_distance = self.worst_filter_distance.max(d);
            }
        }
    }

    pub fn all_certified(&self) -> bool {
        self.ppt_passes + self.filter_passes == self.sampled
    }
}

/// `(|phi+><phi+| + c (|01><01| + |10><10|) / 2) / (1 + c)` with `c = 1 - w_c`.
#[cfg(test)]
fn critical_state_closed_form() -> Matrix<f64> {
    let c = 1.0 - critical_slope::<f64>();
    let h = 0.5 / (1.0 + c);
    let mut m = Matrix::from_real_diagonal(&[h, c * h, c * h, h]);
    m[(0, 3)] = Complex::new(h, 0.0);
    m[(3, 0)] = Complex::new(h, 0.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::sphere_sample;
    use crate::tripartite::fully_local::fully_local_params;
    use crate::tripartite::hidden_state_bc2;

    #[test]
    fn critical_state_matches_its_closed_form() {
        let rho = two_qubit_density(&critical_boundary_point::<f64>()).unwrap();
        assert!(rho.matrix().max_abs_diff(&critical_state_closed_form()) < 1e-14);
    }

    #[test]
    fn decomposition_reproduces_the_separable_state() {
        for (theta, phi) in [(0.3, 1.1), (2.9, -0.4), (1.5, 0.0)] {
            let mut m = Matrix::zeros(4);
            for (w, a, b) in separable_decomposition(theta, phi) {
                let v = crate::linalg::kron_vec(&a, &b);
                m.add_scaled(w, &Matrix::outer(&v));
            }
            let st = f64::sin(theta);
            let (hs, hc) = (theta / 2.0).sin_cos();
            let psi = [
                Complex::new(hc, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::from_polar(hs, phi),
            ];
            let mut expected = Matrix::outer(&psi);
            expected.add_scaled(st / 2.0, &Matrix::from_real_diagonal(&[0.0, 1.0, 1.0, 0.0]));
            assert!(m.max_abs_diff(&expected.scale(1.0 / (1.0 + st))) < 1e-15);
        }
    }

    #[test]
    fn every_sampled_hidden_state_is_certified() {
        let quad = SplitSphereQuadrature::new(48).unwrap();
        let mu_quad = SplitSphereQuadrature::new(32).unwrap();
        let params = fully_local_params(0.6, &quad).unwrap();
        let model = FullyLocalModel::new(params, &quad).unwrap();
        let probes: Vec<_> = sphere_sample::<f64>(3, 4).chunks(2).map(|p| (p[0], p[1])).collect();
        let mut counts = CertificationCounts::default();
        for l in sphere_sample::<f64>(11, 60) {
            let cert = certify_hidden_state(&model, &l, &probes, &mu_quad).unwrap();
            assert!(cert.mu_deviation < 1e-10, "{cert:?}");
            counts.record(&cert);
        }
        assert!(counts.all_certified(), "{counts:?}");
        assert!(counts.separable_branch > 0 && counts.unsteerable_branch > 0);
        assert!(counts.worst_ppt_eigenvalue >= -1e-10);
        assert!(counts.worst_filter_distance <= 1e-8);
    }

    #[test]
    fn filter_is_independent_of_the_angles() {
        let c = 1.0 - critical_slope::<f64>();
        let corr = crate::ghz::CorrelationMatrix::new(0.3, -0.3, 0.2);
        let target = critical_state_closed_form();
        for l in [BlochVector::ex(), BlochVector::new(0.6, 0.64, 0.48)] {
            let rho = hidden_state_bc2(&l, &corr, c).unwrap();
            let d = corr.apply(&l).normalized().unwrap();
            let out = filtered_state(&rho, d.z.acos(), d.y.atan2(d.x)).unwrap();
            assert!(out.matrix().max_abs_diff(&target) < 1e-14);
        }
    }
}
