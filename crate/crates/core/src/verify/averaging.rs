//! Averages over fast angles and the heliocentric/Jacobi secular equivalence.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::{hamiltonian_jac_parts, perturbation_hel, MassParams};

use super::charts::{poincare_chart, ChartSpec};
use super::checks::CheckReport;

/// Composite periodic trapezoidal rule with node doubling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_angle: usize,
    pub max_nodes_per_angle: usize,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_angle: 64,
            max_nodes_per_angle: 512,
            rel_tol: 1e-9,
        }
    }
}

fn grid_mean<F>(f: &F, base: &[f64], angle_idx: &[usize], nodes: usize) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    let k = angle_idx.len();
    let total = nodes.pow(k as u32);
    let h = TAU / nodes as f64;
    let parts: Result<Vec<(Vec<f64>, f64)>> = (0..total)
        .into_par_iter()
        .map(|mut flat| {
            let mut point = base.to_vec();
            for &idx in angle_idx {
                point[idx] = base[idx] + h * (flat % nodes) as f64;
                flat /= nodes;
            }
            let v = f(&point)?;
            let scale = v.iter().map(|x| x.abs()).sum();
            Ok((v, scale))
        })
        .collect();
    let parts = parts?;
    let dim = parts.first().map_or(0, |p| p.0.len());
    let mut sum = vec![0.0; dim];
    let mut scale = 0.0;
    for (v, s) in &parts {
        for (a, b) in sum.iter_mut().zip(v) {
            *a += b;
        }
        scale += s;
    }
    let w = 1.0 / total as f64;
    Ok((
        sum.into_iter().map(|s| s * w).collect(),
        scale * w / dim.max(1) as f64,
    ))
}

/// Average of a vector function over the torus of the given coordinates.
///
/// Nodes are doubled until two successive values differ by at most
/// `rel_tol·max(|value|, mean |integrand|)` in every component.
pub fn torus_average<F>(
    f: F,
    base: &[f64],
    angle_idx: &[usize],
    quad: &QuadratureSpec,
) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    if quad.nodes_per_angle < 8 {
        return Err(Error::DomainViolation(
            "at least 8 nodes per angle are required".into(),
        ));
    }
    let mut nodes = quad.nodes_per_angle;
    let (mut prev, _) = grid_mean(&f, base, angle_idx, nodes)?;
    let mut change = f64::INFINITY;
    while nodes * 2 <= quad.max_nodes_per_angle.max(2 * quad.nodes_per_angle) {
        nodes *= 2;
        let (next, scale) = grid_mean(&f, base, angle_idx, nodes)?;
        change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs() / b.abs().max(scale).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        prev = next;
        if change <= quad.rel_tol {
            return Ok(prev);
        }
    }
    Err(Error::QuadratureNotConverged(change))
}

pub fn torus_average_scalar<F>(
    f: F,
    base: &[f64],
    angle_idx: &[usize],
    quad: &QuadratureSpec,
) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    Ok(torus_average(|p| Ok(vec![f(p)?]), base, angle_idx, quad)?[0])
}

/// Positions of the mean longitudes λ in Poincaré and RPS coordinate vectors.
pub fn fast_angle_indices(n: usize) -> Vec<usize> {
    (3 * n..4 * n).collect()
}

/// Average of f_hel pulled back through `chart` over the mean longitudes.
pub fn average_perturbation(
    chart: &ChartSpec,
    mp: &MassParams,
    secular_point: &[f64],
    quad: &QuadratureSpec,
) -> Result<f64> {
    let n = mp.n();
    torus_average_scalar(
        |p| perturbation_hel(&chart.helio_target(p)?, mp),
        secular_point,
        &fast_angle_indices(n),
        quad,
    )
}

/// Average of f_Jac through the Poincaré map built on Jacobi masses.
pub fn average_jacobi_perturbation(
    mp: &MassParams,
    secular_point: &[f64],
    quad: &QuadratureSpec,
) -> Result<f64> {
    let chart = poincare_chart(vec![mp.jacobi_masses(0), mp.jacobi_masses(1)]);
    torus_average_scalar(
        |p| Ok(hamiltonian_jac_parts(&chart.helio_target(p)?, mp)?.1),
        secular_point,
        &fast_angle_indices(2),
        quad,
    )
}

/// |f_hel^av − f_Jac^av| at the given μ for a Poincaré secular point.
pub fn hel_jac_gap(
    mp: &MassParams,
    secular_point: &[f64],
    quad: &QuadratureSpec,
) -> Result<(f64, f64, f64)> {
    let hel_chart = poincare_chart(vec![mp.kepler_masses(0), mp.kepler_masses(1)]);
    let hel = average_perturbation(&hel_chart, mp, secular_point, quad)?;
    let jac = average_jacobi_perturbation(mp, secular_point, quad)?;
    Ok((hel, jac, (hel - jac).abs()))
}

/// Least-squares slope of log d against log μ.
pub fn log_slope(mus: &[f64], ds: &[f64]) -> f64 {
    let xs: Vec<f64> = mus.iter().map(|m| m.ln()).collect();
    let ys: Vec<f64> = ds.iter().map(|d| d.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Sweep of the averaged-perturbation gap over μ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceSweep {
    /// Rows (μ, f_hel^av, f_Jac^av, d(μ)).
    pub rows: Vec<(f64, f64, f64, f64)>,
    pub d_at_zero: f64,
    pub slope: f64,
    pub report: CheckReport,
}

/// Passes when the fitted slope of d(μ) is within 0.1 of one.
pub fn check_hel_jac_equivalence(
    mp: &MassParams,
    secular_point: &[f64],
    mus: &[f64],
    quad: &QuadratureSpec,
) -> Result<EquivalenceSweep> {
    if mp.n() != 2 {
        return Err(Error::UnsupportedBodyCount(mp.n()));
    }
    if mus.len() < 2 || mus.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::DomainViolation(
            "need at least two positive μ values".into(),
        ));
    }
    let (_, _, d0) = hel_jac_gap(&mp.with_mu(0.0), secular_point, quad)?;
    let mut rows = vec![];
    for &mu in mus {
        let (h, j, d) = hel_jac_gap(&mp.with_mu(mu), secular_point, quad)?;
        rows.push((mu, h, j, d));
    }
    let ds: Vec<f64> = rows.iter().map(|r| r.3).collect();
    let slope = log_slope(mus, &ds);
    let report = CheckReport::new(
        "hel_jac_equivalence",
        0.1,
        vec![("|slope-1|".to_string(), (slope - 1.0).abs())],
    );
    Ok(EquivalenceSweep {
        rows,
        d_at_zero: d0,
        slope,
        report,
    })
}
