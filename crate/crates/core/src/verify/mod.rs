//! Numerical verification harness: canonicity and round-trip suites over
//! seeded samples, cyclic variables, fast-angle averages and a reference
//! integrator of the Cartesian dynamics.

pub mod averaging;
pub mod charts;
pub mod checks;
pub mod integrate;
pub mod sample;
pub mod secular;

use rayon::prelude::*;

use crate::error::Result;
use crate::phase_space::{HelioState, MassParams};
use crate::regular_charts::rps_from_cartesian;

pub use averaging::{
    average_perturbation, check_hel_jac_equivalence, torus_average, torus_average_scalar,
    EquivalenceSweep, QuadratureSpec,
};
pub use charts::{build_chart, chart_at_state, ChartKind, ChartSpec, Target};
pub use checks::{
    check_cyclic, check_round_trip, check_symplectic, check_symplectic_with_warnings,
    target_hamiltonian, CheckReport, ROUND_TRIP_TOL, SYMPLECTIC_STEP, SYMPLECTIC_TOL,
};
pub use integrate::{integrate, Drift, Trajectory};
pub use sample::{default_masses, sample_states};

/// Runs one per-point check over many states concurrently and aggregates.
///
/// A state at which the chart cannot be built counts as a failure.
pub fn run_suite<F>(
    name: &str,
    kind: ChartKind,
    mp: &MassParams,
    states: &[HelioState],
    tol: f64,
    check: F,
) -> CheckReport
where
    F: Fn(&ChartSpec, &[f64]) -> Result<CheckReport> + Sync,
{
    let reports: Vec<CheckReport> = states
        .par_iter()
        .enumerate()
        .map(|(i, hs)| {
            let res = chart_at_state(kind, mp, hs).and_then(|(chart, point)| {
                let mut r = check(&chart, &point)?;
                r.warnings = checks::node_warnings(hs, mp)
                    .into_iter()
                    .map(|w| format!("sample {i}: {w}"))
                    .collect();
                Ok(r)
            });
            res.unwrap_or_else(|e| {
                let mut r = CheckReport::new(name, tol, vec![("error".into(), f64::NAN)]);
                r.warnings.push(format!("sample {i}: {e}"));
                r
            })
        })
        .collect();
    CheckReport::aggregate(format!("{name}[{}]", kind.name()), tol, &reports)
}

pub fn symplectic_suite(kind: ChartKind, mp: &MassParams, states: &[HelioState]) -> CheckReport {
    run_suite("symplectic", kind, mp, states, SYMPLECTIC_TOL, |c, p| {
        check_symplectic(c, p, SYMPLECTIC_STEP, SYMPLECTIC_TOL)
    })
}

pub fn round_trip_suite(kind: ChartKind, mp: &MassParams, states: &[HelioState]) -> CheckReport {
    run_suite("round_trip", kind, mp, states, ROUND_TRIP_TOL, |c, p| {
        check_round_trip(c, p, ROUND_TRIP_TOL)
    })
}

/// Largest change of the RPS pair (p₀, q₀) along a trajectory and of its
/// finite-difference time derivative.
pub fn conserved_pair_drift(traj: &Trajectory, mp: &MassParams) -> Result<(f64, f64)> {
    let mut first = None;
    let mut prev: Option<(f64, f64, f64)> = None;
    let (mut drift, mut rate) = (0.0_f64, 0.0_f64);
    for (t, hs) in traj.times.iter().zip(&traj.states) {
        let c = rps_from_cartesian(hs, mp)?;
        let (p0, q0) = (c.p[0], c.q[0]);
        let (fp, fq) = *first.get_or_insert((p0, q0));
        drift = drift.max((p0 - fp).abs()).max((q0 - fq).abs());
        if let Some((tp, pp, qp)) = prev {
            let dt = t - tp;
            rate = rate.max(((p0 - pp) / dt).abs()).max(((q0 - qp) / dt).abs());
        }
        prev = Some((*t, p0, q0));
    }
    Ok((drift, rate))
}
