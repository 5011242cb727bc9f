//! Batch comparison of the hidden-variable models with quantum predictions.
//!
//! Every batch item is evaluated independently (in parallel) and the
//! results are reduced in input order, so a report depends only on the
//! model parameters, the settings and the integration rule.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ghz::{symmetrize_coords, three_qubit_operator, CorrelationMatrix, ThreeQubitGhzPoint};
use crate::linalg::{kron, kron_all, paulis, projector_unchecked, BlochVector, DensityOperator, Matrix, Outcome};
use crate::numerics::{sphere_sample, MonteCarloRule, SphereRule, SplitSphereQuadrature};
use crate::scalar::{to_f64, Real};
use crate::steering::{
    boundary_p_of_w, conditional_state, normalization_integral_split, LhsModel,
    BOUNDARY_TOL,
};
use crate::tripartite::{
    certify_hidden_state, fully_local_params, max_joint_deviation, quantum_joint3, rho1, simplex_residual,
    BilocalModel, CertificationCounts, FullyLocalModel, Joint3,
};

/// Tolerance of the two-qubit and bilocal comparisons on the split rule.
pub const BILOCAL_TOL: f64 = 1e-6;
/// Tolerance of the fully local comparison on the split rule.
pub const FULLY_LOCAL_TOL: f64 = 1e-5;
/// Order of the split rule used for boundary checks in Monte Carlo mode.
const CHECK_ORDER: usize = 96;
/// Order of the `mu` rule inside hidden-state certification.
const CERT_MU_ORDER: usize = 24;
/// `(y, z)` probes per certified hidden state.
const CERT_PROBES: usize = 4;
/// Seed offset of the certification sample, so it differs from the settings.
const CERT_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;
/// Deviations below this are round-off and exempt from the monotonicity check.
const CONVERGENCE_FLOOR: f64 = 1e-12;

/// How a settings batch was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum BatchMode {
    Random { seed: u64 },
    PauliAxes,
    Custom,
}

/// Measurement directions, one triple per item (pairs use the first two).
#[derive(Clone, Debug)]
pub struct SettingsBatch<T> {
    mode: BatchMode,
    settings: Vec<[BlochVector<T>; 3]>,
}

impl<T: Real> SettingsBatch<T> {
    /// `n` triples of uniform random directions.
    pub fn random(seed: u64, n: usize) -> Self {
        let dirs = sphere_sample(seed, 3 * n);
        Self {
            mode: BatchMode::Random { seed },
            settings: dirs.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
        }
    }

    /// All 27 triples of coordinate axes.
    pub fn pauli_axes() -> Self {
        let axes = [BlochVector::ex(), BlochVector::ey(), BlochVector::ez()];
        let mut settings = Vec::with_capacity(27);
        for x in &axes {
            for y in &axes {
                for z in &axes {
                    settings.push([*x, *y, *z]);
                }
            }
        }
        Self {
            mode: BatchMode::PauliAxes,
            settings,
        }
    }

    /// User-supplied triples; every direction must be a unit vector.
    pub fn custom(settings: Vec<[BlochVector<T>; 3]>) -> Result<Self> {
        settings.iter().flatten().try_for_each(|d| d.ensure_unit())?;
        Ok(Self {
            mode: BatchMode::Custom,
            settings,
        })
    }

    pub fn mode(&self) -> &BatchMode {
        &self.mode
    }

    pub fn settings(&self) -> &[[BlochVector<T>; 3]] {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    pub fn descriptor(&self) -> String {
        match self.mode {
            BatchMode::Random { seed } => format!("{} random triples (seed {seed})", self.len()),
            BatchMode::PauliAxes => "27 Pauli-axis triples".to_string(),
            BatchMode::Custom => format!("{} custom triples", self.len()),
        }
    }
}

/// Which model to compare, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelSpec<T> {
    /// Assemblage of the two-qubit LHS model vs Bob's conditional states.
    Lhs2q { t0: CorrelationMatrix<T> },
    /// Joint distribution of the two-qubit LHV model.
    Lhv2q { t0: CorrelationMatrix<T> },
    /// Bilocal model vs `rho1(T0)`.
    Bilocal { t0: CorrelationMatrix<T> },
    /// Relabelling-averaged bilocal model vs the GHZ-symmetric state.
    SymmetrizedBilocal { t0: CorrelationMatrix<T> },
    /// Permutation-averaged fully local model vs the GHZ-symmetric state.
    FullyLocal { v: T },
    /// Raw fully local model vs `rho2(t1, T1, D01)` with the averaged `D01`.
    FullyLocalUnsymmetrized { v: T },
}

/// Model names accepted by [`ModelKind::from_str`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Lhs2q,
    Lhv2q,
    Bilocal,
    SymmetrizedBilocal,
    #[serde(rename = "fullylocal")]
    FullyLocal,
    #[serde(rename = "fullylocal-unsym")]
    FullyLocalUnsymmetrized,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::Lhs2q,
        ModelKind::Lhv2q,
        ModelKind::Bilocal,
        ModelKind::SymmetrizedBilocal,
        ModelKind::FullyLocal,
        ModelKind::FullyLocalUnsymmetrized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Lhs2q => "lhs2q",
            ModelKind::Lhv2q => "lhv2q",
            ModelKind::Bilocal => "bilocal",
            ModelKind::SymmetrizedBilocal => "symmetrized-bilocal",
            ModelKind::FullyLocal => "fullylocal",
            ModelKind::FullyLocalUnsymmetrized => "fullylocal-unsym",
        }
    }

    /// Split-rule tolerance.
    pub fn tolerance(self) -> f64 {
        match self {
            ModelKind::FullyLocal | ModelKind::FullyLocalUnsymmetrized => FULLY_LOCAL_TOL,
            _ => BILOCAL_TOL,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ModelKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown model {s:?}; expected one of {}", names.join(", "))
            })
    }
}

impl<T: Real> ModelSpec<T> {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Lhs2q { .. } => ModelKind::Lhs2q,
            ModelSpec::Lhv2q { .. } => ModelKind::Lhv2q,
            ModelSpec::Bilocal { .. } => ModelKind::Bilocal,
            ModelSpec::SymmetrizedBilocal { .. } => ModelKind::SymmetrizedBilocal,
            ModelSpec::FullyLocal { .. } => ModelKind::FullyLocal,
            ModelSpec::FullyLocalUnsymmetrized { .. } => ModelKind::FullyLocalUnsymmetrized,
        }
    }

    /// The model of `kind` on the boundary matrix of slope `w` scaled by
    /// `scale` (ignored by the fully local models, which take `v`).
    pub fn from_kind(kind: ModelKind, w: T, scale: T, v: T) -> Result<Self> {
        let t0 = || -> Result<CorrelationMatrix<T>> {
            Ok(boundary_p_of_w(w).map_err(|e| e.in_model(kind.name()))?.correlations().scaled(scale))
        };
        Ok(match kind {
            ModelKind::Lhs2q => ModelSpec::Lhs2q { t0: t0()? },
            ModelKind::Lhv2q => ModelSpec::Lhv2q { t0: t0()? },
            ModelKind::Bilocal => ModelSpec::Bilocal { t0: t0()? },
            ModelKind::SymmetrizedBilocal => ModelSpec::SymmetrizedBilocal { t0: t0()? },
            ModelKind::FullyLocal => ModelSpec::FullyLocal { v },
            ModelKind::FullyLocalUnsymmetrized => ModelSpec::FullyLocalUnsymmetrized { v },
        })
    }
}

/// Integration rule of a verification run.
#[derive(Clone, Debug)]
pub enum Integration<T> {
    Split(SplitSphereQuadrature<T>),
    MonteCarlo(MonteCarloRule<T>),
}

impl<T: Real> Integration<T> {
    pub fn split(order: usize) -> Result<Self> {
        Ok(Integration::Split(SplitSphereQuadrature::new(order)?))
    }

    pub fn monte_carlo(seed: u64, samples: usize) -> Result<Self> {
        Ok(Integration::MonteCarlo(MonteCarloRule::new(seed, samples)?))
    }

    pub fn describe(&self) -> String {
        match self {
            Integration::Split(q) => q.describe(),
            Integration::MonteCarlo(m) => m.describe(),
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            Integration::Split(q) => Some(q.order()),
            Integration::MonteCarlo(_) => None,
        }
    }
}

/// Model parameters as reported.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    /// GHZ-symmetric coordinates of the target state (three-qubit models).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<ThreeQubitGhzPoint<f64>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Deviations {
    pub max: f64,
    pub mean: f64,
}

/// Probability-simplex checks of the model outputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SimplexResiduals {
    /// Largest `|sum_outcomes P - 1|` over the batch.
    pub max_sum_residual: f64,
    /// Smallest single outcome probability over the batch.
    pub min_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub model: ModelKind,
    pub params: ReportParams,
    pub batch: String,
    pub settings: usize,
    pub grid: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_order: Option<usize>,
    pub deviations: Deviations,
    pub tolerance: f64,
    pub pass: bool,
    /// Directions of the worst item: `[x, y]` or `[x, y, z]`.
    pub worst_setting: Vec<[f64; 3]>,
    pub simplex: SimplexResiduals,
    /// `int |T0 lambda| d lambda - 2 pi` for the models built on `T0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization_residual: Option<f64>,
    /// Residuals of the two defining relations of the fully local model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation_residuals: Option<[f64; 2]>,
    /// Worst deviation of the raw (unsymmetrized) fully local model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unsymmetrized_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certification: Option<CertificationCounts>,
    pub wall_time_s: f64,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model:        {}", self.model)?;
        if let Some(t) = self.params.t0 {
            writeln!(f, "T0:           diag[{}, {}, {}]", t[0], t[1], t[2])?;
        }
        if let Some(v) = self.params.v {
            writeln!(f, "v:            {v}")?;
        }
        if let Some(pt) = self.params.target {
            writeln!(f, "target (p,q): ({}, {})", pt.p, pt.q)?;
        }
        writeln!(f, "batch:        {}", self.batch)?;
        writeln!(f, "grid:         {}", self.grid)?;
        if let Some(r) = self.normalization_residual {
            writeln!(f, "normalization residual: {r:.3e}")?;
        }
        if let Some([r0, r1]) = self.relation_residuals {
            writeln!(f, "relation residuals:     {r0:.3e}, {r1:.3e}")?;
        }
        writeln!(
            f,
            "deviation:    max {:.3e}, mean {:.3e} (tolerance {:.1e})",
            self.deviations.max, self.deviations.mean, self.tolerance
        )?;
        writeln!(
            f,
            "simplex:      max |sum - 1| {:.3e}, min P {:.3e}",
            self.simplex.max_sum_residual, self.simplex.min_probability
        )?;
        if let Some(d) = self.unsymmetrized_deviation {
            writeln!(f, "unsymmetrized deviation: {d:.3e}")?;
        }
        if let Some(c) = &self.certification {
            writeln!(
                f,
                "certified:    {}/{} separable (PPT), {}/{} unsteerable (filter); worst PPT eig {:.3e}, worst filter dist {:.3e}",
                c.ppt_passes, c.separable_branch, c.filter_passes, c.unsteerable_branch, c.worst_ppt_eigenvalue, c.worst_filter_distance
            )?;
        }
        let worst: Vec<String> = self
            .worst_setting
            .iter()
            .map(|d| format!("({:.6}, {:.6}, {:.6})", d[0], d[1], d[2]))
            .collect();
        writeln!(f, "worst setting: {}", worst.join(" "))?;
        writeln!(f, "wall time:    {:.3} s", self.wall_time_s)?;
        write!(f, "result:       {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// One batch item's outcome.
struct Item {
    deviation: f64,
    sum_residual: f64,
    min_probability: f64,
    unsym: Option<f64>,
}

/// Per-model state shared by all batch items.
enum Prepared<T> {
    Lhs2q(LhsModel<T>),
    Lhv2q(LhsModel<T>, Matrix<T>),
    Bilocal(BilocalModel<T>, Matrix<T>),
    SymmetrizedBilocal(BilocalModel<T>, Matrix<T>),
    FullyLocal(Box<FullyLocalModel<T>>, Matrix<T>, Option<Matrix<T>>),
    FullyLocalUnsym(Box<FullyLocalModel<T>>, Matrix<T>),
}

fn joint_extremes<T: Real>(j: &Joint3<T>) -> (f64, f64) {
    let min = j.iter().flatten().flatten().copied().fold(T::infinity(), T::min);
    (to_f64(simplex_residual(j)), to_f64(min))
}

impl<T: Real> Prepared<T> {
    fn evaluate(&self, s: &[BlochVector<T>; 3], rule: &impl SphereRule<T>) -> Item {
        let [x, y, z] = s;
        let three = |model: Joint3<T>, rho: &Matrix<T>, unsym: Option<f64>| {
            let (sum_residual, min_probability) = joint_extremes(&model);
            Item {
                deviation: to_f64(max_joint_deviation(&model, &quantum_joint3(rho, x, y, z))),
                sum_residual,
                min_probability,
                unsym,
            }
        };
        match self {
            Prepared::Lhs2q(m) => {
                let sigma = m.assemblage(x, rule);
                let mut dev = T::zero();
                let mut trace = T::zero();
                let mut min = T::infinity();
                for a in Outcome::ALL {
                    let s_a = &sigma[a.index()];
                    dev = dev.max((s_a - &conditional_state(m.correlations(), x, a)).frobenius_norm());
                    trace += s_a.trace().re;
                    min = min.min(s_a.trace().re);
                }
                Item {
                    deviation: to_f64(dev),
                    sum_residual: to_f64((trace - T::one()).abs()),
                    min_probability: to_f64(min),
                    unsym: None,
                }
            }
            Prepared::Lhv2q(m, rho) => {
                let j = m.joint(x, y, rule);
                let mut dev = T::zero();
                for a in Outcome::ALL {
                    for b in Outcome::ALL {
                        let q = rho.trace_product_re(&kron(&projector_unchecked(x, a), &projector_unchecked(y, b)));
                        dev = dev.max((j[a.index()][b.index()] - q).abs());
                    }
                }
                let flat = j.iter().flatten().copied();
                let sum: T = flat.clone().sum();
                Item {
                    deviation: to_f64(dev),
                    sum_residual: to_f64((sum - T::one()).abs()),
                    min_probability: to_f64(flat.fold(T::infinity(), T::min)),
                    unsym: None,
                }
            }
            Prepared::Bilocal(m, rho) => three(m.joint(x, y, z, rule), rho, None),
            Prepared::SymmetrizedBilocal(m, rho) => three(m.symmetrized_joint(x, y, z, rule), rho, None),
            Prepared::FullyLocal(m, rho, raw_target) => {
                let unsym = raw_target
                    .as_ref()
                    .map(|r| to_f64(max_joint_deviation(&m.joint(x, y, z, rule), &quantum_joint3(r, x, y, z))));
                three(m.symmetrized_joint(x, y, z, rule), rho, unsym)
            }
            Prepared::FullyLocalUnsym(m, rho) => three(m.joint(x, y, z, rule), rho, None),
        }
    }
}

fn ghz_point_f64<T: Real>(pt: ThreeQubitGhzPoint<T>) -> ThreeQubitGhzPoint<f64> {
    ThreeQubitGhzPoint {
        p: to_f64(pt.p),
        q: to_f64(pt.q),
    }
}

struct Setup<T> {
    prepared: Prepared<T>,
    params: ReportParams,
    normalization_residual: Option<f64>,
    relation_residuals: Option<[f64; 2]>,
    off_boundary: bool,
}

fn prepare<T: Real>(spec: &ModelSpec<T>, check: &SplitSphereQuadrature<T>) -> Result<Setup<T>> {
    let kind = spec.kind();
    let ctx = |e: Error| e.in_model(kind.name());
    let boundary = |t0: &CorrelationMatrix<T>| -> Result<(ReportParams, f64)> {
        t0.bell_diagonal_state().map_err(ctx)?;
        let residual = to_f64(normalization_integral_split(t0, check) - T::TAU());
        let params = ReportParams {
            t0: Some(t0.diagonal().map(to_f64)),
            ..Default::default()
        };
        Ok((params, residual))
    };
    let setup = |prepared: Prepared<T>, params: ReportParams, residual: Option<f64>| Setup {
        prepared,
        params,
        normalization_residual: residual,
        relation_residuals: None,
        off_boundary: residual.is_some_and(|r| !(r.abs() <= BOUNDARY_TOL)),
    };
    Ok(match *spec {
        ModelSpec::Lhs2q { t0 } => {
            let (params, r) = boundary(&t0)?;
            setup(Prepared::Lhs2q(LhsModel::unchecked(t0)), params, Some(r))
        }
        ModelSpec::Lhv2q { t0 } => {
            let (params, r) = boundary(&t0)?;
            let rho = t0.bell_diagonal_operator();
            setup(Prepared::Lhv2q(LhsModel::unchecked(t0), rho), params, Some(r))
        }
        ModelSpec::Bilocal { t0 } | ModelSpec::SymmetrizedBilocal { t0 } => {
            let (mut params, r) = boundary(&t0)?;
            let rho = rho1(&t0).map_err(ctx)?;
            let pt = symmetrize_coords(&rho).map_err(ctx)?;
            params.target = Some(ghz_point_f64(pt));
            let model = BilocalModel::unchecked(t0);
            let prepared = if kind == ModelKind::Bilocal {
                Prepared::Bilocal(model, rho.into_matrix())
            } else {
                Prepared::SymmetrizedBilocal(model, three_qubit_operator(pt.p, pt.q))
            };
            setup(prepared, params, Some(r))
        }
        ModelSpec::FullyLocal { v } | ModelSpec::FullyLocalUnsymmetrized { v } => {
            let fl = fully_local_params(v, check).map_err(ctx)?;
            let model = FullyLocalModel::new(fl, check).map_err(ctx)?;
            let pt = fl.coordinates();
            let params = ReportParams {
                t0: Some(fl.corr.diagonal().map(to_f64)),
                v: Some(to_f64(v)),
                target: Some(ghz_point_f64(pt)),
            };
            let prepared = if kind == ModelKind::FullyLocal {
                let raw = model.target_state(check).ok().map(DensityOperator::into_matrix);
                Prepared::FullyLocal(Box::new(model), three_qubit_operator(pt.p, pt.q), raw)
            } else {
                let target = model.target_state(check).map_err(ctx)?.into_matrix();
                Prepared::FullyLocalUnsym(Box::new(model), target)
            };
            let mut s = setup(prepared, params, None);
            s.relation_residuals = Some(fl.relation_residuals(check).map(to_f64));
            s
        }
    })
}

/// Compares `spec` with its quantum prediction on every item of `batch`.
///
/// The report passes iff the largest deviation is within the model
/// tolerance (`3 / sqrt(N)` in Monte Carlo mode) and the model parameters
/// sit on their boundary. Off-boundary matrices are still evaluated, with
/// the normalization residual reported.
pub fn run_verification<T: Real>(
    spec: &ModelSpec<T>,
    batch: &SettingsBatch<T>,
    rule: &Integration<T>,
) -> Result<VerificationReport> {
    if batch.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let start = Instant::now();
    let kind = spec.kind();
    let check = match rule {
        Integration::Split(q) => q.clone(),
        Integration::MonteCarlo(_) => SplitSphereQuadrature::new(CHECK_ORDER)?,
    };
    let setup = prepare(spec, &check)?;

    let items: Vec<Item> = match rule {
        Integration::Split(q) => batch.settings.par_iter().map(|s| setup.prepared.evaluate(s, q)).collect(),
        Integration::MonteCarlo(m) => batch.settings.par_iter().map(|s| setup.prepared.evaluate(s, m)).collect(),
    };

    let (mut worst, mut max, mut sum) = (0usize, 0.0f64, 0.0f64);
    let mut simplex = SimplexResiduals {
        max_sum_residual: 0.0,
        min_probability: f64::INFINITY,
    };
    let mut unsym: Option<f64> = None;
    for (i, it) in items.iter().enumerate() {
        // NaN counts as worst.
        if !(it.deviation <= max) {
            max = it.deviation;
            worst = i;
        }
        sum += it.deviation;
        simplex.max_sum_residual = simplex.max_sum_residual.max(it.sum_residual);
        simplex.min_probability = simplex.min_probability.min(it.min_probability);
        if let Some(u) = it.unsym {
            unsym = Some(unsym.unwrap_or(0.0).max(u));
        }
    }

    let certification = match &setup.prepared {
        Prepared::FullyLocal(m, ..) | Prepared::FullyLocalUnsym(m, _) => Some(certify_batch(m, batch)?),
        _ => None,
    };

    let tolerance = match rule {
        Integration::Split(_) => kind.tolerance(),
        Integration::MonteCarlo(m) => to_f64(m.tolerance()),
    };
    let pass = max <= tolerance
        && !setup.off_boundary
        && simplex.max_sum_residual <= tolerance
        && certification.as_ref().is_none_or(CertificationCounts::all_certified);
    let n = if matches!(kind, ModelKind::Lhs2q) {
        1
    } else if matches!(kind, ModelKind::Lhv2q) {
        2
    } else {
        3
    };
    Ok(VerificationReport {
        model: kind,
        params: setup.params,
        batch: batch.descriptor(),
        settings: batch.len(),
        grid: rule.describe(),
        grid_order: rule.order(),
        deviations: Deviations {
            max,
            mean: sum / items.len() as f64,
        },
        tolerance,
        pass,
        worst_setting: batch.settings[worst][..n].iter().map(|d| d.to_array().map(to_f64)).collect(),
        simplex,
        normalization_residual: setup.normalization_residual,
        relation_residuals: setup.relation_residuals,
        unsymmetrized_deviation: unsym,
        certification,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Certifies one hidden state per batch item, drawn uniformly on the sphere.
fn certify_batch<T: Real>(model: &FullyLocalModel<T>, batch: &SettingsBatch<T>) -> Result<CertificationCounts> {
    let seed = match batch.mode {
        BatchMode::Random { seed } => seed ^ CERT_SEED_SALT,
        _ => CERT_SEED_SALT,
    };
    let lambdas: Vec<BlochVector<T>> = sphere_sample(seed, batch.len());
    let probes: Vec<(BlochVector<T>, BlochVector<T>)> =
        batch.settings.iter().take(CERT_PROBES).map(|s| (s[1], s[2])).collect();
    let mu_quad = SplitSphereQuadrature::new(CERT_MU_ORDER)?;
    let certs = lambdas
        .par_iter()
        .map(|l| certify_hidden_state(model, l, &probes, &mu_quad))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = CertificationCounts::default();
    for c in &certs {
        counts.record(c);
    }
    Ok(counts)
}

/// Maximum deviation at each quadrature order, and whether doubling the
/// order never raised it by more than 10 %.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub orders: Vec<usize>,
    pub max_deviations: Vec<f64>,
    pub monotone: bool,
}

/// Runs [`run_verification`] at each order in `orders` (soft check only).
pub fn convergence_check<T: Real>(
    spec: &ModelSpec<T>,
    batch: &SettingsBatch<T>,
    orders: &[usize],
) -> Result<ConvergenceReport> {
    let max_deviations = orders
        .iter()
        .map(|&o| Ok(run_verification(spec, batch, &Integration::split(o)?)?.deviations.max))
        .collect::<Result<Vec<f64>>>()?;
    let monotone = max_deviations
        .windows(2)
        .all(|w| w[1] <= 1.1 * w[0] || w[1] <= CONVERGENCE_FLOOR);
    Ok(ConvergenceReport {
        orders: orders.to_vec(),
        max_deviations,
        monotone,
    })
}

/// Bell operators available to [`bell_value`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellOperator {
    /// `XXX - XYY - YXY - YYX`.
    Mermin,
}

impl BellOperator {
    fn matrix<T: Real>(self) -> Matrix<T> {
        match self {
            BellOperator::Mermin => {
                let [x, y, _] = paulis::<T>();
                let mut m = kron_all(&[&x, &x, &x]);
                for term in [[&x, &y, &y], [&y, &x, &y], [&y, &y, &x]] {
                    m.add_scaled(-T::one(), &kron_all(&term));
                }
                m
            }
        }
    }
}

/// `Tr(rho B)` for a three-qubit state.
pub fn bell_value<T: Real>(rho: &DensityOperator<T>, operator: BellOperator) -> Result<T> {
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: rho.dim(),
        });
    }
    Ok(rho.matrix().trace_product_re(&operator.matrix::<T>()))
}
