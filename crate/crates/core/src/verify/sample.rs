//! Seeded random regular states away from every declared singular manifold.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{rot1, rot3, Mat3, Vec3};
use crate::kepler::{lambda_from_a, planar_delaunay, PlanarDelaunay};
use crate::phase_space::{HelioState, MassParams};

use super::charts::node_norms;

/// Ranges of the sampled orbital data (angles in degrees).
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRanges {
    pub ecc: (f64, f64),
    pub a1: (f64, f64),
    pub a_ratio: (f64, f64),
    pub first_tilt_deg: (f64, f64),
    pub mutual_tilt_deg: (f64, f64),
    /// Rejection threshold on every normalized node length (degrees).
    pub min_node_deg: f64,
}

impl Default for SampleRanges {
    fn default() -> Self {
        SampleRanges {
            ecc: (0.05, 0.6),
            a1: (1.0, 1.2),
            a_ratio: (1.6, 2.2),
            first_tilt_deg: (10.0, 60.0),
            mutual_tilt_deg: (5.0, 60.0),
            min_node_deg: 3.0,
        }
    }
}

/// Orbit of given shape with unit normal `normal` and unit perihelion direction `peri`.
pub fn state_from_orbit(
    a: f64,
    e: f64,
    ell: f64,
    normal: Vec3,
    peri: Vec3,
    rm: f64,
    cm: f64,
) -> crate::Result<(Vec3, Vec3)> {
    let lambda = lambda_from_a(a, rm, cm);
    let d = PlanarDelaunay {
        Lambda: lambda,
        Gamma: lambda * (1.0 - e * e).sqrt(),
        ell,
        g: 0.0,
    };
    let (yb, xb) = planar_delaunay(&d, rm, cm)?;
    let frame = Mat3::from_columns(peri, normal.cross(peri), normal);
    Ok((frame * yb, frame * xb))
}

/// Unit vector at polar angle `tilt` from `axis`, azimuth `phi` around it.
fn tilted(axis: Vec3, tilt: f64, phi: f64) -> Vec3 {
    let helper = if axis[0].abs() < 0.9 {
        Vec3::K1
    } else {
        Vec3::K2
    };
    let u = axis.cross(helper).unit().unwrap_or(Vec3::K1);
    let w = axis.cross(u);
    (axis * tilt.cos() + (u * phi.cos() + w * phi.sin()) * tilt.sin())
        .unit()
        .unwrap_or(axis)
}

fn uniform(rng: &mut ChaCha8Rng, r: (f64, f64)) -> f64 {
    rng.gen_range(r.0..=r.1)
}

/// One regular state; retries until every node family clears the threshold.
pub fn sample_state(rng: &mut ChaCha8Rng, mp: &MassParams, ranges: &SampleRanges) -> HelioState {
    let n = mp.n();
    let min_node = ranges.min_node_deg.to_radians().sin();
    loop {
        let mut hs = HelioState {
            y: vec![Vec3::ZERO; n],
            x: vec![Vec3::ZERO; n],
        };
        let mut a = uniform(rng, ranges.a1);
        let first = uniform(rng, ranges.first_tilt_deg).to_radians();
        let mut normal = rot3(rng.gen_range(0.0..TAU)) * (rot1(first) * Vec3::K3);
        let mut ok = true;
        for i in 0..n {
            if i > 0 {
                a *= uniform(rng, ranges.a_ratio);
                let tilt = uniform(rng, ranges.mutual_tilt_deg).to_radians();
                normal = tilted(normal, tilt, rng.gen_range(0.0..TAU));
            }
            let e = uniform(rng, ranges.ecc);
            let peri = tilted(normal, std::f64::consts::FRAC_PI_2, rng.gen_range(0.0..TAU));
            let ell = rng.gen_range(0.0..TAU);
            let (rm, cm) = mp.kepler_masses(i);
            match state_from_orbit(a, e, ell, normal, peri, rm, cm) {
                Ok((y, x)) => {
                    hs.y[i] = y;
                    hs.x[i] = x;
                }
                Err(_) => ok = false,
            }
        }
        if ok && node_norms(&hs, mp).iter().all(|(_, v)| *v >= min_node) {
            return hs;
        }
    }
}

/// `count` regular states drawn deterministically from `seed`.
pub fn sample_states(mp: &MassParams, count: usize, seed: u64) -> Vec<HelioState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranges = SampleRanges::default();
    (0..count)
        .map(|_| sample_state(&mut rng, mp, &ranges))
        .collect()
}

/// Masses used by the sample suites: sun 1, planets of order one times μ.
pub fn default_masses(n: usize, mu: f64) -> MassParams {
    let m = (0..n)
        .map(|i| 1.0 - 0.2 * i as f64 / n.max(1) as f64)
        .collect();
    MassParams::new(1.0, mu, m).expect("valid default masses")
}

/// Two planets on moderately eccentric orbits with a 20° mutual tilt,
/// a₁ = 1, a₂ = 1.8; the reference configuration of the demos and integration tests.
pub fn reference_two_planet_state(mp: &MassParams) -> crate::Result<HelioState> {
    let (t1, t2) = (0.1_f64, 0.25_f64);
    let n1 = Vec3::new(0.0, -t1.sin(), t1.cos());
    let n2 = Vec3::new(0.0, t2.sin(), t2.cos());
    let p2 = Vec3::new(0.0, t2.cos(), -t2.sin());
    let (rm1, cm1) = mp.kepler_masses(0);
    let (rm2, cm2) = mp.kepler_masses(1);
    let (y1, x1) = state_from_orbit(1.0, 0.1, 0.3, n1, Vec3::K1, rm1, cm1)?;
    let (y2, x2) = state_from_orbit(1.8, 0.15, 2.0, n2, p2, rm2, cm2)?;
    Ok(HelioState {
        y: vec![y1, y2],
        x: vec![x1, x2],
    })
}

/// Keplerian period of body i at semi-major axis a.
pub fn kepler_period(mp: &MassParams, i: usize, a: f64) -> f64 {
    let (rm, cm) = mp.kepler_masses(i);
    TAU / crate::kepler::mean_motion(lambda_from_a(a, rm, cm), rm, cm)
}
