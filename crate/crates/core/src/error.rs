use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |H - H^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotUnit { trace: f64 },

    #[error("operator is not positive (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("direction is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("point (p={p}, q={q}) is outside the {family} triangle: violates {constraint}")]
    OutsideTriangle {
        p: f64,
        q: f64,
        family: &'static str,
        constraint: &'static str,
    },

    #[error("symmetrized coordinates (p={p}, q={q}) of the pseudo-state are unphysical: violates {constraint}")]
    UnphysicalPseudoState {
        p: f64,
        q: f64,
        constraint: &'static str,
    },

    #[error("{name} = {value} is outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("line does not cross the curve in the parameter range")]
    NoCrossing,

    #[error("line crosses the curve {count} times in the parameter range")]
    MultipleCrossings { count: usize },

    #[error("degenerate hidden-variable direction (T lambda = 0)")]
    DegenerateDirection,

    #[error("quadrature grid is empty")]
    EmptyGrid,

    #[error("correlation matrix is off the steering boundary (normalization residual {residual:e})")]
    OffBoundary { residual: f64 },

    #[error("model parameters are inconsistent (residual {residual:e})")]
    InconsistentParameters { residual: f64 },

    #[error("{model}: {source}")]
    InvalidModel { model: &'static str, source: Box<Error> },
}

impl Error {
    /// Attaches the name of the model whose parameters failed.
    pub fn in_model(self, model: &'static str) -> Self {
        Error::InvalidModel {
            model,
            source: Box::new(self),
        }
    }
}
