//! Boundary curves of the two- and three-qubit triangles as tables.

use clap::ValueEnum;
use ghzloc::ghz::{
    bisep_w_boundary_p, concurrences, separable_boundary_p, three_tangle, two_qubit_separable_q,
    wghz_boundary, ThreeQubitGhzPoint, TwoQubitGhzPoint,
};
use ghzloc::steering::{boundary_p_of_w, critical_slope};
use ghzloc::tripartite::{bilocal_curve, fully_local_curve_closed_form, fully_local_params};
use ghzloc::SplitSphereQuadrature;

use crate::CliError;

const SQRT3: f64 = 1.732_050_807_568_877_2;
const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveName {
    /// Separable/biseparable line, parametrized by q.
    Sep3q,
    /// Biseparable/W line, parametrized by q.
    Bisepw3q,
    /// W/GHZ curve, parametrized by v in [0, 1].
    Wghz3q,
    /// Two-qubit steering boundary, parametrized by the slope w.
    Steer2q,
    /// Bilocal curve, parametrized by w >= w_c.
    Bilocal3q,
    /// Fully local curve, parametrized by v in [w_c, 1].
    Fullylocal3q,
    /// Two-qubit separable boundary, parametrized by p.
    Sep2q,
}

impl CurveName {
    pub fn file_stem(self) -> &'static str {
        match self {
            CurveName::Sep3q => "sep3q",
            CurveName::Bisepw3q => "bisepw3q",
            CurveName::Wghz3q => "wghz3q",
            CurveName::Steer2q => "steer2q",
            CurveName::Bilocal3q => "bilocal3q",
            CurveName::Fullylocal3q => "fullylocal3q",
            CurveName::Sep2q => "sep2q",
        }
    }

    /// Closed parameter interval(s) on which the curve lies in its triangle.
    ///
    /// The steering curve has no `w < 0` branch: every two-qubit state with
    /// `q < 0` is separable.
    fn domain(self) -> Vec<(f64, f64)> {
        let wc = critical_slope::<f64>();
        match self {
            CurveName::Sep3q => vec![(0.0, SQRT3 / 4.0)],
            CurveName::Bisepw3q => vec![(SQRT3 / 12.0, SQRT3 / 4.0)],
            CurveName::Wghz3q => vec![(0.0, 1.0)],
            CurveName::Steer2q | CurveName::Bilocal3q => vec![(wc, f64::INFINITY)],
            CurveName::Fullylocal3q => vec![(wc, 1.0)],
            CurveName::Sep2q => vec![(-0.25, 0.25)],
        }
    }

    pub fn default_range(self) -> (f64, f64) {
        let wc = critical_slope::<f64>();
        match self {
            CurveName::Steer2q | CurveName::Bilocal3q => (wc, 100.0),
            CurveName::Sep2q => (0.0, 0.25),
            _ => self.domain()[0],
        }
    }

    /// Slopes are sampled geometrically: the curves change fastest near `w_c`.
    fn geometric(self) -> bool {
        matches!(self, CurveName::Steer2q | CurveName::Bilocal3q)
    }
}

/// Curve name, sample count and parameter range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSpec {
    pub name: CurveName,
    pub samples: usize,
    pub range: (f64, f64),
}

/// Slack when checking a user range against a curve domain.
const DOMAIN_SLACK: f64 = 1e-12;

impl CurveSpec {
    pub fn new(name: CurveName, samples: usize, range: Option<(f64, f64)>) -> Result<Self, CliError> {
        if samples < 2 {
            return Err(CliError::Input(format!("sample count must be at least 2, got {samples}")));
        }
        let range = range.unwrap_or_else(|| name.default_range());
        let (lo, hi) = range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::Input(format!("invalid range [{lo}, {hi}]: need finite from < to")));
        }
        let inside = name
            .domain()
            .iter()
            .any(|&(a, b)| lo >= a - DOMAIN_SLACK && hi <= b + DOMAIN_SLACK);
        if !inside {
            let doms: Vec<String> = name.domain().iter().map(|(a, b)| format!("[{a}, {b}]")).collect();
            return Err(CliError::Input(format!(
                "range [{lo}, {hi}] is outside the domain of {} ({})",
                name.file_stem(),
                doms.join(" or ")
            )));
        }
        Ok(Self { name, samples, range })
    }

    /// Monotonically increasing parameter values, endpoints included.
    pub fn parameters(&self) -> Vec<f64> {
        let (lo, hi) = self.range;
        let n = self.samples - 1;
        let mut out: Vec<f64> = if self.name.geometric() {
            let (a, b) = (lo.ln(), hi.ln());
            (0..=n).map(|i| (a + (b - a) * i as f64 / n as f64).exp()).collect()
        } else {
            (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
        };
        out[0] = lo;
        out[n] = hi;
        out
    }
}

/// A CSV-ready table.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

fn check3(pt: ThreeQubitGhzPoint<f64>) -> Result<[f64; 2], CliError> {
    pt.validate()?;
    Ok([pt.p, pt.q])
}

fn check2(pt: TwoQubitGhzPoint<f64>) -> Result<[f64; 2], CliError> {
    pt.validate()?;
    Ok([pt.p, pt.q])
}

/// Evaluates `spec`; every `(p, q)` is checked against its triangle.
pub fn generate(spec: &CurveSpec, quad: &SplitSphereQuadrature) -> Result<Table, CliError> {
    let params = spec.parameters();
    let mut rows = Vec::with_capacity(params.len());
    let mut header = vec!["param", "p", "q"];
    if spec.name == CurveName::Fullylocal3q {
        header.extend(["p_closed", "q_closed", "closed_in_triangle"]);
    }
    for &t in &params {
        let row = match spec.name {
            CurveName::Sep3q => check3(ThreeQubitGhzPoint { p: separable_boundary_p(t), q: t })?.to_vec(),
            CurveName::Bisepw3q => check3(ThreeQubitGhzPoint { p: bisep_w_boundary_p(t), q: t })?.to_vec(),
            CurveName::Wghz3q => check3(wghz_boundary(t)?)?.to_vec(),
            CurveName::Steer2q => check2(boundary_p_of_w(t)?.two_qubit_point())?.to_vec(),
            CurveName::Bilocal3q => check3(bilocal_curve(t)?)?.to_vec(),
            CurveName::Sep2q => check2(TwoQubitGhzPoint { p: t, q: two_qubit_separable_q(t) })?.to_vec(),
            CurveName::Fullylocal3q => {
                let numeric = check3(fully_local_params(t, quad)?.coordinates())?;
                // The closed form is emitted as is, flagged when it leaves the triangle.
                let closed = fully_local_curve_closed_form(t)?;
                let inside = if closed.validate().is_ok() { 1.0 } else { 0.0 };
                vec![numeric[0], numeric[1], closed.p, closed.q, inside]
            }
        };
        let mut full = Vec::with_capacity(row.len() + 1);
        full.push(t);
        full.extend(row);
        rows.push(full);
    }
    Ok(Table { header, rows })
}

/// Closed polyline through the corners of the two-qubit triangle.
pub fn triangle2q() -> Table {
    let top = 1.0 / (2.0 * SQRT2);
    corners(&[[-0.5, top], [0.5, top], [0.0, -top]])
}

/// Closed polyline through the corners of the three-qubit triangle.
pub fn triangle3q() -> Table {
    corners(&[[-0.5, SQRT3 / 4.0], [0.5, SQRT3 / 4.0], [0.0, -1.0 / (4.0 * SQRT3)]])
}

fn corners(c: &[[f64; 2]]) -> Table {
    let rows = c
        .iter()
        .chain(c.first())
        .enumerate()
        .map(|(i, [p, q])| vec![i as f64, *p, *q])
        .collect();
    Table {
        header: vec!["param", "p", "q"],
        rows,
    }
}

/// `(w, p, q, C_T, C_G, tau3)` along the bilocal curve.
pub fn measures_along_bilocal(spec: &CurveSpec) -> Result<Table, CliError> {
    let mut rows = Vec::with_capacity(spec.samples);
    for w in spec.parameters() {
        let pt = bilocal_curve(w)?;
        let c = concurrences(&pt);
        let tau = three_tangle(&pt)?;
        rows.push(vec![w, pt.p, pt.q, c.c_t, c.c_g, tau]);
    }
    Ok(Table {
        header: vec!["param", "p", "q", "c_t", "c_g", "tau3"],
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_are_monotone_with_exact_endpoints() {
        for name in CurveName::value_variants() {
            let spec = CurveSpec::new(*name, 17, None).unwrap();
            let t = spec.parameters();
            assert_eq!(t.len(), 17);
            assert!(t.windows(2).all(|w| w[0] < w[1]), "{name:?}");
            assert_eq!((t[0], t[16]), spec.range);
        }
    }

    #[test]
    fn ranges_are_checked() {
        assert!(CurveSpec::new(CurveName::Wghz3q, 1, None).is_err());
        assert!(CurveSpec::new(CurveName::Wghz3q, 5, Some((0.5, 1.5))).is_err());
        assert!(CurveSpec::new(CurveName::Steer2q, 5, Some((-0.2, 0.2))).is_err());
        assert!(CurveSpec::new(CurveName::Steer2q, 5, Some((-10.0, -0.5))).is_err());
        assert!(CurveSpec::new(CurveName::Fullylocal3q, 5, Some((0.2, 1.0))).is_err());
    }

    #[test]
    fn wghz_endpoint_row() {
        let quad = SplitSphereQuadrature::new(16).unwrap();
        let t = generate(&CurveSpec::new(CurveName::Wghz3q, 11, None).unwrap(), &quad).unwrap();
        let last = t.rows.last().unwrap();
        assert_eq!(last[0], 1.0);
        assert!((last[1] - 0.375).abs() < 1e-15);
        assert!((last[2] - SQRT3 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn steering_curve_touches_the_triangle_side() {
        let quad = SplitSphereQuadrature::new(16).unwrap();
        let t = generate(&CurveSpec::new(CurveName::Steer2q, 5, None).unwrap(), &quad).unwrap();
        let (p, q) = (t.rows[0][1], t.rows[0][2]);
        // Right side |p| = q / sqrt2 + 1/4.
        assert!((p - (q / SQRT2 + 0.25)).abs() < 1e-9, "{p} {q}");
    }
}
