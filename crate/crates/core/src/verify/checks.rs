//! Numerical canonicity, cyclicity and round-trip checks over a chart.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::angle_diff;
use crate::phase_space::{hamiltonian_full, hamiltonian_hel, FullState, HelioState, MassParams};
use crate::regular_charts::{rps_to_cartesian, RpsCoords};

use super::charts::{node_norms, ChartSpec, MapFn, Target};

pub const SYMPLECTIC_TOL: f64 = 1e-7;
pub const SYMPLECTIC_STEP: f64 = 1e-5;
pub const ROUND_TRIP_TOL: f64 = 1e-10;
/// Node lengths in [EPS_NODE, NEAR_NODE] are reported as warnings.
pub const NEAR_NODE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub passed: bool,
    pub warnings: Vec<String>,
    pub per_component: Vec<(String, f64)>,
}

impl CheckReport {
    pub fn new(
        check_name: impl Into<String>,
        tolerance: f64,
        per_component: Vec<(String, f64)>,
    ) -> Self {
        let max_deviation = per_component.iter().map(|c| c.1).fold(0.0, f64::max);
        let nan = per_component.iter().any(|c| c.1.is_nan());
        CheckReport {
            check_name: check_name.into(),
            tolerance,
            max_deviation: if nan { f64::NAN } else { max_deviation },
            passed: !nan && max_deviation <= tolerance,
            warnings: vec![],
            per_component,
        }
    }

    /// Merges reports of the same check at several points: per-label maxima.
    pub fn aggregate(
        check_name: impl Into<String>,
        tolerance: f64,
        reports: &[CheckReport],
    ) -> Self {
        let mut comps: Vec<(String, f64)> = vec![];
        let mut warnings = vec![];
        for r in reports {
            for (label, v) in &r.per_component {
                match comps.iter_mut().find(|c| &c.0 == label) {
                    Some(c) => c.1 = if v.is_nan() { f64::NAN } else { c.1.max(*v) },
                    None => comps.push((label.clone(), *v)),
                }
            }
            warnings.extend(r.warnings.iter().cloned());
        }
        let mut out = CheckReport::new(check_name, tolerance, comps);
        out.warnings = warnings;
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("check: {}\n", self.check_name));
        s.push_str(&format!("tolerance: {:.17e}\n", self.tolerance));
        s.push_str(&format!("max_deviation: {:.17e}\n", self.max_deviation));
        s.push_str(&format!("passed: {}\n", self.passed));
        s.push_str(&format!("warnings: {}\n", self.warnings.len()));
        for w in &self.warnings {
            s.push_str(&format!("  - {w}\n"));
        }
        s.push_str(&format!("components: {}\n", self.per_component.len()));
        for (label, v) in &self.per_component {
            s.push_str(&format!("  {label} {v:.17e}\n"));
        }
        s
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Warnings for node families of a state whose normalized length is small but nonzero.
pub fn node_warnings(hs: &HelioState, mp: &MassParams) -> Vec<String> {
    node_norms(hs, mp)
        .into_iter()
        .filter(|(_, v)| *v >= crate::geom::EPS_NODE && *v <= NEAR_NODE)
        .map(|(name, v)| format!("near-singular node {name}: {v:.3e}"))
        .collect()
}

/// Difference of two target vectors, angles taken on the circle.
fn diff(a: &[f64], b: &[f64], angles: &[bool]) -> Vec<f64> {
    a.iter()
        .zip(b)
        .zip(angles)
        .map(|((x, y), &ang)| if ang { angle_diff(*x, *y) } else { x - y })
        .collect()
}

/// Central difference of `map` along coordinate k at half-width h.
///
/// The denominator is the difference of the perturbed abscissae actually
/// represented, so linear maps with representable slopes differentiate exactly.
fn central(map: &MapFn, point: &[f64], k: usize, h: f64, out_angles: &[bool]) -> Result<Vec<f64>> {
    let mut plus = point.to_vec();
    let mut minus = point.to_vec();
    plus[k] += h;
    minus[k] -= h;
    let denom = plus[k] - minus[k];
    let stencil = |e: Error| {
        Error::DomainViolation(format!(
            "finite-difference stencil leaves the domain along coordinate {k}: {e}"
        ))
    };
    let fp = map(&plus).map_err(stencil)?;
    let fm = map(&minus).map_err(stencil)?;
    Ok(diff(&fp, &fm, out_angles)
        .into_iter()
        .map(|d| d / denom)
        .collect())
}

/// Jacobian of `map` at `point` by the eighth-order central stencil with
/// per-coordinate step `step·max(1, |value|)`; column k = ∂map/∂point_k.
pub fn jacobian(
    map: &MapFn,
    point: &[f64],
    step: f64,
    out_angles: &[bool],
) -> Result<Vec<Vec<f64>>> {
    (0..point.len())
        .map(|k| {
            let h = step * point[k].abs().max(1.0);
            let d: Vec<Vec<f64>> = (1..=4)
                .map(|m| central(map, point, k, m as f64 * h, out_angles))
                .collect::<Result<_>>()?;
            Ok((0..d[0].len())
                .map(|i| (56.0 * d[0][i] - 28.0 * d[1][i] + 8.0 * d[2][i] - d[3][i]) / 35.0)
                .collect())
        })
        .collect()
}

/// Entries of JᵀΩJ for Ω = [[0, I], [−I, 0]] on the target; `cols` are the Jacobian columns.
pub fn pulled_back_form(cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = cols.len();
    let half = cols.first().map_or(0, |c| c.len() / 2);
    let omega = |u: &[f64], v: &[f64]| -> f64 {
        (0..half)
            .map(|i| u[i] * v[half + i] - u[half + i] * v[i])
            .sum()
    };
    let mut m = vec![vec![0.0; d]; d];
    for a in 0..d {
        for b in a + 1..d {
            let w = omega(&cols[a], &cols[b]);
            m[a][b] = w;
            m[b][a] = -w;
        }
    }
    m
}

fn canonical_entry(d: usize, a: usize, b: usize) -> f64 {
    let half = d / 2;
    if b == a + half {
        1.0
    } else if a == b + half {
        -1.0
    } else {
        0.0
    }
}

/// Max |JᵀΩJ − Ω| of the inverse map (coordinates → target), by coordinate row.
pub fn check_symplectic(
    chart: &ChartSpec,
    point: &[f64],
    step: f64,
    tol: f64,
) -> Result<CheckReport> {
    if !(step > 0.0) {
        return Err(Error::DomainViolation("step must be positive".into()));
    }
    if !chart.in_domain(point) {
        return Err(Error::DomainViolation(format!(
            "point outside the domain of {}",
            chart.name
        )));
    }
    let cols = jacobian(&chart.inverse, point, step, &chart.target_angle_mask)?;
    let m = pulled_back_form(&cols);
    let d = chart.dim;
    let per = (0..d)
        .map(|a| {
            let dev = (0..d)
                .map(|b| (m[a][b] - canonical_entry(d, a, b)).abs())
                .fold(0.0, f64::max);
            (chart.labels[a].clone(), dev)
        })
        .collect();
    Ok(CheckReport::new(
        format!("symplectic[{}]", chart.name),
        tol,
        per,
    ))
}

/// Same as [`check_symplectic`] with near-node warnings computed for the given masses.
pub fn check_symplectic_with_warnings(
    chart: &ChartSpec,
    mp: &MassParams,
    point: &[f64],
    step: f64,
    tol: f64,
) -> Result<CheckReport> {
    let mut r = check_symplectic(chart, point, step, tol)?;
    if let Ok(hs) = chart.helio_target(point) {
        r.warnings = node_warnings(&hs, mp);
    }
    Ok(r)
}

pub type HamFn = std::sync::Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync>;

/// The Hamiltonian evaluated on a chart's target vector.
pub fn target_hamiltonian(chart: &ChartSpec, mp: &MassParams) -> HamFn {
    let mp = mp.clone();
    let n = mp.n();
    match chart.target {
        Target::Helio => {
            std::sync::Arc::new(move |t: &[f64]| hamiltonian_hel(&HelioState::from_flat(t), &mp))
        }
        Target::Full => {
            std::sync::Arc::new(move |t: &[f64]| hamiltonian_full(&FullState::from_flat(t), &mp))
        }
        Target::Coords => std::sync::Arc::new(move |t: &[f64]| {
            hamiltonian_hel(&rps_to_cartesian(&RpsCoords::from_vec(t, n), &mp)?, &mp)
        }),
    }
}

/// Numerical partials of the pulled-back Hamiltonian along the named coordinates.
pub fn check_cyclic(
    chart: &ChartSpec,
    hamiltonian: &HamFn,
    point: &[f64],
    variables: &[&str],
    tol: f64,
) -> Result<CheckReport> {
    if !chart.in_domain(point) {
        return Err(Error::DomainViolation(format!(
            "point outside the domain of {}",
            chart.name
        )));
    }
    let eval = |v: &[f64]| -> Result<f64> {
        let t = (chart.inverse)(v)
            .map_err(|e| Error::DomainViolation(format!("stencil leaves the domain: {e}")))?;
        hamiltonian(&t)
    };
    let mut per = vec![];
    for name in variables {
        let k = chart.labels.iter().position(|l| l == name).ok_or_else(|| {
            Error::DomainViolation(format!("chart {} has no coordinate {name}", chart.name))
        })?;
        let h = 1e-5 * point[k].abs().max(1.0);
        let mut plus = point.to_vec();
        let mut minus = point.to_vec();
        plus[k] += h;
        minus[k] -= h;
        let denom = plus[k] - minus[k];
        per.push((
            name.to_string(),
            ((eval(&plus)? - eval(&minus)?) / denom).abs(),
        ));
    }
    Ok(CheckReport::new(
        format!("cyclic[{}]", chart.name),
        tol,
        per,
    ))
}

/// forward∘inverse against the identity, per coordinate.
pub fn check_round_trip(chart: &ChartSpec, point: &[f64], tol: f64) -> Result<CheckReport> {
    let back = (chart.forward)(&(chart.inverse)(point)?)?;
    let per = chart
        .labels
        .iter()
        .zip(diff(point, &back, &chart.angle_mask))
        .map(|(l, d)| (l.clone(), d.abs()))
        .collect();
    Ok(CheckReport::new(
        format!("round_trip[{}]", chart.name),
        tol,
        per,
    ))
}
