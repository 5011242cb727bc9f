//! Quadrature, sampling, root finding and curve intersection.

pub mod curves;
pub mod quadrature;
pub mod roots;
pub mod sampling;

pub use curves::{intersect_line_curve, intersect_line_curve_with, Crossing};
pub use quadrature::{
    orthonormal_complement, sphere_integrate, GaussLegendre, Integrand, SphereGrid, SphereRule,
    SplitSphereQuadrature,
};
pub use roots::{bisect, find_root, Bracket};
pub use sampling::{mc_integrate, sphere_sample, MonteCarloRule};

/// Default Gauss-Legendre order of the sphere rules.
pub const DEFAULT_QUAD_ORDER: usize = 200;

/// Environment variable overriding [`DEFAULT_QUAD_ORDER`].
pub const QUAD_ORDER_ENV: &str = "GHZLOC_QUAD_ORDER";

/// Default order, honouring `GHZLOC_QUAD_ORDER` when it parses as a positive integer.
pub fn default_quad_order() -> usize {
    std::env::var(QUAD_ORDER_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_QUAD_ORDER)
}
