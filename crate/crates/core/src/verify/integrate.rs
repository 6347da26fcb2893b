//! Reference Cartesian dynamics: fixed-step Gragg–Bulirsch–Stoer extrapolation
//! of the sun-and-planets system, with monitoring of the classical integrals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::phase_space::{
    from_heliocentric, integrals_full, to_heliocentric, FullState, HelioState, Integrals,
    MassParams, EPS_COLL,
};

/// Substep counts of the modified midpoint rule; four levels give order eight.
const SEQUENCE: [usize; 4] = [2, 4, 6, 8];
/// Local error estimates above this (relative to the state scale) abort the run.
const MAX_LOCAL_ERROR: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    /// max |E(t) − E(0)|/|E(0)|.
    pub energy: f64,
    /// max |Cₖ(t) − Cₖ(0)|/|C(0)| per component.
    pub angular_momentum: [f64; 3],
    /// max |Pₖ(t) − Pₖ(0)|/Σ|pᵢ(0)| per component.
    pub linear_momentum: [f64; 3],
}

impl Drift {
    pub fn max(&self) -> f64 {
        self.angular_momentum
            .iter()
            .chain(&self.linear_momentum)
            .fold(self.energy, |a, &b| a.max(b))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<HelioState>,
    pub step: f64,
    pub drift: Drift,
}

fn vector_field(s: &FullState, mp: &MassParams, t: f64) -> Result<FullState> {
    let bodies = s.q.len();
    let mut dp = vec![Vec3::ZERO; bodies];
    let mut dq = vec![Vec3::ZERO; bodies];
    // H = μ|p₀|²/2m₀ + Σ|pᵢ|²/2mᵢ − Σ m₀mᵢ/|q₀−qᵢ| − μΣ mᵢmⱼ/|qᵢ−qⱼ|
    dq[0] = s.p[0] * (mp.mu / mp.m0);
    for i in 1..bodies {
        dq[i] = s.p[i] * (1.0 / mp.m[i - 1]);
    }
    for a in 0..bodies {
        for b in a + 1..bodies {
            let r = s.q[a] - s.q[b];
            let d = r.norm();
            if d < EPS_COLL {
                return Err(Error::CollisionDetected(t));
            }
            let k = if a == 0 { mp.m0 } else { mp.mu * mp.m[a - 1] } * mp.m[b - 1];
            let f = r * (k / (d * d * d));
            dp[a] -= f;
            dp[b] += f;
        }
    }
    Ok(FullState { p: dp, q: dq })
}

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(u, v)| u + a * v).collect()
}

fn field_flat(z: &[f64], mp: &MassParams, t: f64) -> Result<Vec<f64>> {
    Ok(vector_field(&FullState::from_flat(z), mp, t)?.to_flat())
}

fn modified_midpoint(
    z: &[f64],
    mp: &MassParams,
    t: f64,
    h: f64,
    substeps: usize,
) -> Result<Vec<f64>> {
    let dt = h / substeps as f64;
    let mut prev = z.to_vec();
    let mut cur = axpy(z, dt, &field_flat(z, mp, t)?);
    for k in 1..substeps {
        let next = axpy(&prev, 2.0 * dt, &field_flat(&cur, mp, t + k as f64 * dt)?);
        prev = cur;
        cur = next;
    }
    let end = field_flat(&cur, mp, t + h)?;
    Ok(prev
        .iter()
        .zip(&cur)
        .zip(&end)
        .map(|((p, c), f)| 0.5 * (p + c + dt * f))
        .collect())
}

/// One extrapolated step; returns the new state and the local error estimate.
fn gbs_step(z: &[f64], mp: &MassParams, t: f64, h: f64) -> Result<(Vec<f64>, f64)> {
    let mut prev_row: Vec<Vec<f64>> = vec![];
    for (j, &nj) in SEQUENCE.iter().enumerate() {
        let mut row = vec![modified_midpoint(z, mp, t, h, nj)?];
        for k in 1..=j {
            let ratio = (nj as f64 / SEQUENCE[j - k] as f64).powi(2) - 1.0;
            let next = row[k - 1]
                .iter()
                .zip(&prev_row[k - 1])
                .map(|(r, p)| r + (r - p) / ratio)
                .collect();
            row.push(next);
        }
        prev_row = row;
    }
    let m = prev_row.len() - 1;
    let best = prev_row[m].clone();
    let estimate = best
        .iter()
        .zip(&prev_row[m - 1])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let scale = z.iter().map(|v| v.abs()).fold(1.0, f64::max);
    if !(estimate / scale <= MAX_LOCAL_ERROR) || best.iter().any(|v| !v.is_finite()) {
        return Err(Error::StepRejected(t));
    }
    Ok((best, estimate))
}

/// Integrates Hamilton's equations from `hs` (lifted to zero total momentum) over [0, T].
pub fn integrate(hs: &HelioState, mp: &MassParams, t_final: f64, dt: f64) -> Result<Trajectory> {
    integrate_full(&from_heliocentric(hs), mp, t_final, dt)
}

pub fn integrate_full(
    start: &FullState,
    mp: &MassParams,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0 && t_final >= 0.0) {
        return Err(Error::DomainViolation("need dt > 0 and T ≥ 0".into()));
    }
    // a ratio within rounding of an integer does not add a step
    let steps = (t_final / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let i0 = integrals_full(start, mp).map_err(|_| Error::CollisionDetected(0.0))?;
    let p_scale: f64 = start
        .p
        .iter()
        .map(|p| p.norm())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let mut drift = Drift {
        energy: 0.0,
        angular_momentum: [0.0; 3],
        linear_momentum: [0.0; 3],
    };
    let mut z = start.to_flat();
    let mut times = vec![0.0];
    let mut states = vec![to_heliocentric(start)];
    for k in 0..steps {
        let t = k as f64 * h;
        z = gbs_step(&z, mp, t, h)?.0;
        let s = FullState::from_flat(&z);
        let ik = integrals_full(&s, mp).map_err(|_| Error::CollisionDetected(t + h))?;
        update_drift(&mut drift, &i0, &ik, p_scale);
        times.push(t + h);
        states.push(to_heliocentric(&s));
    }
    Ok(Trajectory {
        times,
        states,
        step: h,
        drift,
    })
}

fn update_drift(d: &mut Drift, i0: &Integrals, ik: &Integrals, p_scale: f64) {
    d.energy = d
        .energy
        .max((ik.e - i0.e).abs() / i0.e.abs().max(f64::MIN_POSITIVE));
    let g = i0.g.max(f64::MIN_POSITIVE);
    for c in 0..3 {
        d.angular_momentum[c] = d.angular_momentum[c].max((ik.c[c] - i0.c[c]).abs() / g);
        d.linear_momentum[c] = d.linear_momentum[c].max((ik.p[c] - i0.p[c]).abs() / p_scale);
    }
}
