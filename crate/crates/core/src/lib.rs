//! Local hidden variable models, entanglement classes and entanglement
//! measures for GHZ-symmetric two- and three-qubit states.
//!
//! Every numerical routine is generic over the scalar type (`f32` or
//! `f64`); the aliases at the crate root fix it to `f64`.

pub mod error;
pub mod ghz;
pub mod linalg;
pub mod numerics;
pub mod scalar;
pub mod steering;
pub mod tripartite;
pub mod verify;

pub use error::{Error, Result};
pub use ghz::EntanglementClass;
pub use linalg::Outcome;
pub use scalar::Real;

pub type Matrix = linalg::Matrix<f64>;
pub type BlochVector = linalg::BlochVector<f64>;
pub type DensityOperator = linalg::DensityOperator<f64>;
pub type TwoQubitGhzPoint = ghz::TwoQubitGhzPoint<f64>;
pub type ThreeQubitGhzPoint = ghz::ThreeQubitGhzPoint<f64>;
pub type CorrelationMatrix = ghz::CorrelationMatrix<f64>;
pub type SphereGrid = numerics::SphereGrid<f64>;
pub type SplitSphereQuadrature = numerics::SplitSphereQuadrature<f64>;
