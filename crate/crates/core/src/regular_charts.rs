//! Regular and symmetric reductions: RPS coordinates, the full reduction at
//! fixed G, the perihelia reduction, and reflection transformations.

#![allow(non_snake_case)]

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    angle_in_plane, frame_from_axes, frame_rot, horizontal_rotation, horizontal_rotation_pq, rot1,
    rot3, wrap_angle, Mat3, Vec3, EPS_NODE,
};
use crate::kepler::{
    elements_from_state, lambda_from_a, planar_delaunay, planar_poincare, planar_poincare_forward,
    PlanarDelaunay, PlanarPoincare, EPS_ECC,
};
use crate::node_reductions::{parallel, triangle_cos, DepritPlanetaryCoords, RadauRegularized};
use crate::phase_space::{total_angular_momentum, HelioState, MassParams};

/// RPS coordinates: (η, ξ) eccentricity pairs per body and (p_j, q_j), j = 0..n−1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RpsCoords {
    pub Lambda: Vec<f64>,
    pub lam: Vec<f64>,
    pub eta: Vec<f64>,
    pub xi: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl RpsCoords {
    pub fn n(&self) -> usize {
        self.Lambda.len()
    }

    /// Actions (Λ, η, p) followed by angles (λ, ξ, q).
    pub fn to_vec(&self) -> Vec<f64> {
        [
            self.Lambda.as_slice(),
            &self.eta,
            &self.p,
            &self.lam,
            &self.xi,
            &self.q,
        ]
        .concat()
    }

    pub fn from_vec(v: &[f64], n: usize) -> Self {
        let part = |k: usize| v[k * n..(k + 1) * n].to_vec();
        Self {
            Lambda: part(0),
            eta: part(1),
            p: part(2),
            lam: part(3),
            xi: part(4),
            q: part(5),
        }
    }
}

/// Reading of the (p_j, q_j) display: `A` gives both the radius √(2δ_j),
/// `B` gives q_j the radius √(2δ_{j+1}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RpsConvention {
    A,
    B,
}

/// Partial sums ψ^(j) for j = −1..n−1 (stored at j+1), with ψ_{n−1} := π.
fn psi_partial_sums(zeta: f64, psi: &[f64]) -> Vec<f64> {
    let mut out = vec![zeta];
    for &p in psi {
        out.push(out.last().unwrap() + p);
    }
    out.push(out.last().unwrap() + PI);
    out
}

pub fn rps_from_deprit(c: &DepritPlanetaryCoords, conv: RpsConvention) -> Result<RpsCoords> {
    let n = c.n();
    let sums = psi_partial_sums(c.zeta, &c.psi);
    // Ψ_j for j = −1..n−1 stored at j+1, with Ψ_{−1} = C₃ and Ψ_{n−1} = Γ_n
    let mut big_psi = vec![c.C3];
    big_psi.extend(&c.Psi);
    big_psi.push(c.Gamma[n - 1]);
    let gamma_at = |j: usize| if j == 0 { 0.0 } else { c.Gamma[j - 1] };
    // δ_j = Γ_j + Ψ_j − Ψ_{j−1} for j = 0..n, δ_n = 0
    let delta = |j: usize| -> f64 {
        if j == n {
            0.0
        } else {
            gamma_at(j) + big_psi[j + 1] - big_psi[j]
        }
    };
    let root = |d: f64| -> Result<f64> {
        if d < -1e-12 {
            return Err(Error::ActionOverflow(format!(
                "negative square-root argument {d}"
            )));
        }
        Ok((2.0 * d.max(0.0)).sqrt())
    };
    let mut out = RpsCoords {
        Lambda: c.Lambda.clone(),
        lam: vec![0.0; n],
        eta: vec![0.0; n],
        xi: vec![0.0; n],
        p: vec![0.0; n],
        q: vec![0.0; n],
    };
    for i in 0..n {
        let varpi = c.gamma[i] + sums[i + 1];
        let rho = root(c.Lambda[i] - c.Gamma[i])?;
        out.lam[i] = wrap_angle(c.ell[i] + varpi);
        out.eta[i] = rho * varpi.cos();
        out.xi[i] = -rho * varpi.sin();
    }
    for j in 0..n {
        let arg = sums[j];
        out.p[j] = root(delta(j))? * arg.cos();
        let rq = match conv {
            RpsConvention::A => root(delta(j))?,
            RpsConvention::B => root(delta(j + 1))?,
        };
        out.q[j] = -rq * arg.sin();
    }
    Ok(out)
}

/// Γ_i, Ψ_j (j = 0..n−1 with Ψ_{n−1} = Γ_n) and C₃ recovered from RPS actions.
fn rps_actions(c: &RpsCoords) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let n = c.n();
    let mut gamma = vec![0.0; n];
    for i in 0..n {
        gamma[i] = c.Lambda[i] - 0.5 * (c.eta[i].powi(2) + c.xi[i].powi(2));
        if !(gamma[i] > 0.0) {
            return Err(Error::ActionOverflow(format!(
                "η²+ξ² ≥ 2Λ for body {}",
                i + 1
            )));
        }
    }
    let mut big_psi = vec![0.0; n];
    big_psi[n - 1] = gamma[n - 1];
    for j in (1..n).rev() {
        big_psi[j - 1] = gamma[j - 1] + big_psi[j] - 0.5 * (c.p[j].powi(2) + c.q[j].powi(2));
        if !(big_psi[j - 1] > 0.0) {
            return Err(Error::ActionOverflow(format!("Ψ_{} ≤ 0", j - 1)));
        }
    }
    let c3 = big_psi[0] - 0.5 * (c.p[0].powi(2) + c.q[0].powi(2));
    if !(c3 >= -big_psi[0]) {
        return Err(Error::ActionOverflow("p₀²+q₀² > 4G".into()));
    }
    Ok((gamma, big_psi, c3))
}

pub fn rps_to_deprit(c: &RpsCoords) -> Result<DepritPlanetaryCoords> {
    let n = c.n();
    let (gamma, big_psi, c3) = rps_actions(c)?;
    let sums: Vec<f64> = (0..n).map(|j| (-c.q[j]).atan2(c.p[j])).collect();
    let mut out = DepritPlanetaryCoords {
        Lambda: c.Lambda.clone(),
        Gamma: gamma,
        C3: c3,
        Psi: big_psi[..n - 1].to_vec(),
        ell: vec![0.0; n],
        gamma: vec![0.0; n],
        zeta: wrap_angle(sums[0]),
        psi: (1..n).map(|k| wrap_angle(sums[k] - sums[k - 1])).collect(),
    };
    for i in 0..n {
        let varpi = (-c.xi[i]).atan2(c.eta[i]);
        let base = if i + 1 < n {
            sums[i + 1]
        } else {
            sums[n - 1] + PI
        };
        out.gamma[i] = wrap_angle(varpi - base);
        out.ell[i] = wrap_angle(c.lam[i] - varpi);
    }
    Ok(out)
}

/// Rotation about the horizontal axis of (p, q) by the angle ι with 1 − cos ι = c(p²+q²)/2.
fn level_rotation(p: f64, q: f64, c: f64, sign: f64) -> Result<Mat3> {
    let cos_i = 1.0 - 0.5 * c * (p * p + q * q);
    if cos_i < -1.0 - 1e-12 {
        return Err(Error::ActionOverflow(
            "inclination pair beyond the antipode".into(),
        ));
    }
    let s = (0.5 * c * (1.0 + cos_i)).max(0.0).sqrt();
    Ok(horizontal_rotation(p, q, c, s, sign))
}

/// Coefficients (c_k, c*_k) of the level-k rotations from Ψ_{k−1}, Γ_k, Ψ_k.
fn level_coefficients(psi_prev: f64, gamma: f64, psi: f64) -> (f64, f64) {
    (
        (psi + psi_prev - gamma) / (2.0 * psi_prev * gamma),
        (gamma + psi_prev - psi) / (2.0 * psi_prev * psi),
    )
}

/// Places body i with planar Poincaré data in the given frame.
fn place_bodies(
    c_lambda: &[f64],
    lam: &[f64],
    eta: &[f64],
    xi: &[f64],
    frames: &[Mat3],
    mp: &MassParams,
) -> Result<HelioState> {
    let n = frames.len();
    let mut hs = HelioState {
        y: vec![Vec3::ZERO; n],
        x: vec![Vec3::ZERO; n],
    };
    for i in 0..n {
        let (rm, cm) = mp.kepler_masses(i);
        let pp = PlanarPoincare {
            Lambda: c_lambda[i],
            lam: lam[i],
            eta: eta[i],
            xi: xi[i],
        };
        let (yb, xb) = planar_poincare(&pp, rm, cm)?;
        hs.y[i] = frames[i] * yb;
        hs.x[i] = frames[i] * xb;
    }
    Ok(hs)
}

/// Body frames from the level chain starting at `m` with levels `first..n−1`.
fn level_chain(
    mut m: Mat3,
    first: usize,
    c: &RpsCoords,
    gamma: &[f64],
    big_psi: &[f64],
    frames: &mut Vec<Mat3>,
) -> Result<()> {
    let n = c.n();
    for k in first..n {
        let (ck, cks) = level_coefficients(big_psi[k - 1], gamma[k - 1], big_psi[k]);
        frames.push(m * level_rotation(c.p[k], c.q[k], ck, 1.0)?);
        m = m * level_rotation(c.p[k], c.q[k], cks, -1.0)?;
    }
    frames.push(m);
    Ok(())
}

pub fn rps_to_cartesian(c: &RpsCoords, mp: &MassParams) -> Result<HelioState> {
    let n = c.n();
    if n < 2 || n != mp.n() {
        return Err(Error::UnsupportedBodyCount(n));
    }
    let (gamma, big_psi, _) = rps_actions(c)?;
    let m0 = level_rotation(c.p[0], c.q[0], 1.0 / big_psi[0], 1.0)?;
    let mut frames = Vec::with_capacity(n);
    level_chain(m0, 1, c, &gamma, &big_psi, &mut frames)?;
    place_bodies(&c.Lambda, &c.lam, &c.eta, &c.xi, &frames, mp)
}

/// Extracts (p, q) of a level from the direction of the tilted axis in the current frame.
fn extract_level(t: Vec3, c: f64, cos_i: f64) -> (f64, f64) {
    let s = (0.5 * c * (1.0 + cos_i)).max(0.0).sqrt();
    horizontal_rotation_pq(t, s, 1.0)
}

/// Walks the RPS chain on a Cartesian state; returns (p, q) per level and body frames.
fn rps_walk(hs: &HelioState, mp: &MassParams) -> Result<RpsCoords> {
    let n = hs.n();
    if n < 2 {
        return Err(Error::UnsupportedBodyCount(n));
    }
    let cs = hs.angular_momenta();
    let mut s = vec![Vec3::ZERO; n];
    s[n - 1] = cs[n - 1];
    for j in (0..n - 1).rev() {
        s[j] = s[j + 1] + cs[j];
    }
    let gamma: Vec<f64> = cs.iter().map(|v| v.norm()).collect();
    let big_psi: Vec<f64> = s.iter().map(|v| v.norm()).collect();
    if gamma.iter().chain(&big_psi).any(|&g| g < EPS_NODE) {
        return Err(Error::Rectilinear);
    }
    let g = big_psi[0];
    let (mut p, mut q) = (vec![0.0; n], vec![0.0; n]);
    let c_hat = s[0] * (1.0 / g);
    let (p0, q0) = extract_level(c_hat, 1.0 / g, c_hat[2]);
    p[0] = p0;
    q[0] = q0;
    let mut m = level_rotation(p0, q0, 1.0 / g, 1.0)?;
    let mut frames = Vec::with_capacity(n);
    for k in 1..n {
        let (ck, cks) = level_coefficients(big_psi[k - 1], gamma[k - 1], big_psi[k]);
        let t = (m.transpose() * cs[k - 1]) * (1.0 / gamma[k - 1]);
        let cos_i = triangle_cos(big_psi[k - 1], gamma[k - 1], big_psi[k])?;
        let (pk, qk) = extract_level(t, ck, cos_i);
        p[k] = pk;
        q[k] = qk;
        frames.push(m * level_rotation(pk, qk, ck, 1.0)?);
        m = m * level_rotation(pk, qk, cks, -1.0)?;
    }
    frames.push(m);
    let mut out = RpsCoords {
        Lambda: vec![0.0; n],
        lam: vec![0.0; n],
        eta: vec![0.0; n],
        xi: vec![0.0; n],
        p,
        q,
    };
    for i in 0..n {
        let (rm, cm) = mp.kepler_masses(i);
        let ft = frames[i].transpose();
        let pp = planar_poincare_forward(ft * hs.y[i], ft * hs.x[i], rm, cm)?;
        out.Lambda[i] = pp.Lambda;
        out.lam[i] = pp.lam;
        out.eta[i] = pp.eta;
        out.xi[i] = pp.xi;
    }
    Ok(out)
}

/// Inverse of [`rps_to_cartesian`], regular at vanishing eccentricities and nodes.
pub fn rps_from_cartesian(hs: &HelioState, mp: &MassParams) -> Result<RpsCoords> {
    rps_walk(hs, mp)
}

/// Fully reduced coordinates at fixed G: (Λ, λ̂, η, ξ) per body and (p_k, q_k), k = 2..n−1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullRedCoords {
    pub Lambda: Vec<f64>,
    pub lam: Vec<f64>,
    pub eta: Vec<f64>,
    pub xi: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub G: f64,
}

impl FullRedCoords {
    pub fn n(&self) -> usize {
        self.Lambda.len()
    }

    /// Actions (Λ, η, p₂..) followed by angles (λ̂, ξ, q₂..); 6n − 4 entries.
    pub fn to_vec(&self) -> Vec<f64> {
        [
            self.Lambda.as_slice(),
            &self.eta,
            &self.p,
            &self.lam,
            &self.xi,
            &self.q,
        ]
        .concat()
    }

    pub fn from_vec(v: &[f64], n: usize, G: f64) -> Self {
        let m = n - 2;
        let h = 2 * n + m;
        Self {
            Lambda: v[..n].to_vec(),
            eta: v[n..2 * n].to_vec(),
            p: v[2 * n..h].to_vec(),
            lam: v[h..h + n].to_vec(),
            xi: v[h + n..h + 2 * n].to_vec(),
            q: v[h + 2 * n..].to_vec(),
            G,
        }
    }

    fn as_rps(&self, p1: f64) -> RpsCoords {
        let mut p = vec![0.0, p1];
        p.extend(&self.p);
        let mut q = vec![0.0, 0.0];
        q.extend(&self.q);
        RpsCoords {
            Lambda: self.Lambda.clone(),
            lam: self.lam.clone(),
            eta: self.eta.clone(),
            xi: self.xi.clone(),
            p,
            q,
        }
    }
}

pub fn fullred_inverse(c: &FullRedCoords, mp: &MassParams) -> Result<HelioState> {
    let n = c.n();
    if n < 2 || n != mp.n() || c.p.len() != n - 2 {
        return Err(Error::UnsupportedBodyCount(n));
    }
    // Ψ₀ = G is a parameter, so the level-1 pair is only needed through its actions
    let tmp = c.as_rps(0.0);
    let (gamma, mut big_psi, _) = rps_actions(&tmp)?;
    big_psi[0] = c.G;
    let c1 = triangle_cos(c.G, gamma[0], big_psi[1])?;
    let c1s = triangle_cos(c.G, big_psi[1], gamma[0])?;
    let mut frames = vec![rot1(c1.acos())];
    level_chain(rot1(-c1s.acos()), 2, &tmp, &gamma, &big_psi, &mut frames)?;
    place_bodies(&c.Lambda, &c.lam, &c.eta, &c.xi, &frames, mp)
}

/// Rotation (ν̂₁, Ĉ×ν̂₁, Ĉ) with ν₁ = C × C⁽¹⁾.
pub fn fullred_frame(hs: &HelioState) -> Result<Mat3> {
    let c = total_angular_momentum(hs);
    let c1 = hs.x[0].cross(hs.y[0]);
    if parallel(c, c1) {
        return Err(Error::NodeSingular(1));
    }
    frame_from_axes(c.cross(c1), c).ok_or(Error::NodeSingular(1))
}

/// Inverse of [`fullred_inverse`] after the rigid rotation by [`fullred_frame`].
pub fn fullred_forward(hs: &HelioState, mp: &MassParams) -> Result<FullRedCoords> {
    let b = fullred_frame(hs)?;
    let r = rps_walk(&hs.transform(&b.transpose()), mp)?;
    Ok(FullRedCoords {
        Lambda: r.Lambda,
        lam: r.lam,
        eta: r.eta,
        xi: r.xi,
        p: r.p[2..].to_vec(),
        q: r.q[2..].to_vec(),
        G: total_angular_momentum(hs).norm(),
    })
}

/// Perihelia coordinates (Λ, χ, Θ; ℓ, κ, ϑ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriheliaCoords {
    pub Lambda: Vec<f64>,
    pub chi: Vec<f64>,
    pub Theta: Vec<f64>,
    pub ell: Vec<f64>,
    pub kappa: Vec<f64>,
    pub vartheta: Vec<f64>,
}

impl PeriheliaCoords {
    pub fn n(&self) -> usize {
        self.Lambda.len()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        [
            self.Lambda.as_slice(),
            &self.chi,
            &self.Theta,
            &self.ell,
            &self.kappa,
            &self.vartheta,
        ]
        .concat()
    }

    pub fn from_vec(v: &[f64], n: usize) -> Self {
        let part = |k: usize| v[k * n..(k + 1) * n].to_vec();
        Self {
            Lambda: part(0),
            chi: part(1),
            Theta: part(2),
            ell: part(3),
            kappa: part(4),
            vartheta: part(5),
        }
    }
}

pub fn perihelia_forward(hs: &HelioState, mp: &MassParams) -> Result<PeriheliaCoords> {
    let n = hs.n();
    if n < 1 {
        return Err(Error::UnsupportedBodyCount(n));
    }
    let mut lambda = vec![0.0; n];
    let mut ell = vec![0.0; n];
    let mut per = vec![Vec3::ZERO; n];
    for i in 0..n {
        let (rm, cm) = mp.kepler_masses(i);
        let el = elements_from_state(hs.y[i], hs.x[i], rm, cm)?;
        if el.e < EPS_ECC {
            return Err(Error::ChartSingular(format!(
                "zero eccentricity of body {}",
                i + 1
            )));
        }
        lambda[i] = lambda_from_a(el.a, rm, cm);
        ell[i] = el.ell;
        per[i] = el.p_dir;
    }
    let cs = hs.angular_momenta();
    let mut s = vec![Vec3::ZERO; n];
    s[n - 1] = cs[n - 1];
    for j in (0..n - 1).rev() {
        s[j] = s[j + 1] + cs[j];
    }
    if s[0].norm() < EPS_NODE {
        return Err(Error::ChartSingular(
            "vanishing total angular momentum".into(),
        ));
    }
    // on C ∥ ±k³ the first node is taken along k¹, as for the Deprit chart
    let nu1 = if parallel(Vec3::K3, s[0]) {
        Vec3::K1
    } else {
        Vec3::K3.cross(s[0])
    };
    // nodes ñ_j = S_j × P_j (ñ_n = P_n) and ν̃_{j+1} = P_j × S_{j+1}
    let mut nt = vec![Vec3::ZERO; n];
    let mut nut = vec![nu1];
    for j in 0..n {
        if j + 1 < n {
            if parallel(s[j], per[j]) {
                return Err(Error::ChartSingular(format!("node ñ{} vanishes", j + 1)));
            }
            nt[j] = s[j].cross(per[j]);
            if parallel(per[j], s[j + 1]) {
                return Err(Error::ChartSingular(format!("node ν̃{} vanishes", j + 2)));
            }
            nut.push(per[j].cross(s[j + 1]));
        } else {
            nt[j] = per[j];
        }
    }
    let mut out = PeriheliaCoords {
        Lambda: lambda,
        chi: s.iter().map(|v| v.norm()).collect(),
        Theta: vec![s[0][2]; n],
        ell,
        kappa: vec![0.0; n],
        vartheta: vec![angle_in_plane(Vec3::K1, nu1, Vec3::K3); n],
    };
    for j in 0..n {
        out.kappa[j] = angle_in_plane(nut[j], nt[j], s[j]);
        if j >= 1 {
            out.Theta[j] = s[j].dot(per[j - 1]);
            out.vartheta[j] = angle_in_plane(nt[j - 1], nut[j], per[j - 1]);
        }
    }
    Ok(out)
}

fn bounded_cos(num: f64, den: f64, what: &str) -> Result<f64> {
    let c = num / den;
    if !(den > 0.0 && c.abs() <= 1.0 + 1e-12) {
        return Err(Error::InvalidActions(format!("|{what}| exceeds its bound")));
    }
    Ok(c.clamp(-1.0, 1.0))
}

pub fn perihelia_inverse(c: &PeriheliaCoords, mp: &MassParams) -> Result<HelioState> {
    let n = c.n();
    if n < 1 || n != mp.n() {
        return Err(Error::UnsupportedBodyCount(n));
    }
    let mut f = frame_rot(
        c.vartheta[0],
        bounded_cos(c.Theta[0], c.chi[0], "Θ₀")?.acos(),
    );
    let mut s = vec![Vec3::ZERO; n];
    let mut per = vec![Vec3::ZERO; n];
    for j in 0..n {
        s[j] = f.column(2) * c.chi[j];
        if j + 1 < n {
            let th = bounded_cos(c.Theta[j + 1], c.chi[j], "Θ")?.acos();
            let g = f * frame_rot(c.kappa[j], th);
            per[j] = g.column(2);
            let th2 = bounded_cos(c.Theta[j + 1], c.chi[j + 1], "Θ")?.acos();
            f = g * frame_rot(c.vartheta[j + 1], th2);
        } else {
            per[j] = f * (rot3(c.kappa[j]) * Vec3::K1);
        }
    }
    let mut hs = HelioState {
        y: vec![Vec3::ZERO; n],
        x: vec![Vec3::ZERO; n],
    };
    for i in 0..n {
        let ci = if i + 1 < n { s[i] - s[i + 1] } else { s[i] };
        let gamma = ci.norm();
        if !(gamma > EPS_NODE && gamma <= c.Lambda[i] * (1.0 + 1e-14)) {
            return Err(Error::InvalidActions(format!(
                "|C⁽{}⁾| = {gamma} outside (0, Λ]",
                i + 1
            )));
        }
        let (rm, cm) = mp.kepler_masses(i);
        let d = PlanarDelaunay {
            Lambda: c.Lambda[i],
            Gamma: gamma.min(c.Lambda[i]),
            ell: c.ell[i],
            g: 0.0,
        };
        let (yb, xb) = planar_delaunay(&d, rm, cm)?;
        let c_hat = ci * (1.0 / gamma);
        let frame = Mat3::from_columns(per[i], c_hat.cross(per[i]), c_hat);
        hs.y[i] = frame * yb;
        hs.x[i] = frame * xb;
    }
    Ok(hs)
}

/// (Θ, ϑ) ↦ (−Θ, 2k_jπ − ϑ), conjugate to the sign flip of the second Cartesian component.
pub fn reflect_perihelia_branch(c: &PeriheliaCoords, k: &[i64]) -> PeriheliaCoords {
    PeriheliaCoords {
        Theta: c.Theta.iter().map(|t| -t).collect(),
        vartheta: c
            .vartheta
            .iter()
            .zip(k)
            .map(|(v, &kj)| TAU * kj as f64 - v)
            .collect(),
        ..c.clone()
    }
}

/// Reflection with ϑ kept in [0, 2π).
pub fn reflect_perihelia(c: &PeriheliaCoords) -> PeriheliaCoords {
    let mut r = reflect_perihelia_branch(c, &vec![1; c.n()]);
    r.vartheta.iter_mut().for_each(|v| *v = wrap_angle(*v));
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReflectionKind {
    /// (λ, η, ξ) ↦ (−λ, η, −ξ); (y, x) ↦ ((−y₁, y₂, y₃), (x₁, −x₂, −x₃)).
    First,
    /// (λ, η, ξ) ↦ (π − λ, −η, ξ); (y, x) ↦ ((y₁, −y₂, −y₃), (−x₁, x₂, x₃)).
    Second,
}

impl ReflectionKind {
    /// Sign patterns (on y, on x) of the Cartesian counterpart.
    pub fn cartesian_signs(self) -> ([f64; 3], [f64; 3]) {
        match self {
            ReflectionKind::First => ([-1.0, 1.0, 1.0], [1.0, -1.0, -1.0]),
            ReflectionKind::Second => ([1.0, -1.0, -1.0], [-1.0, 1.0, 1.0]),
        }
    }

    fn apply(self, lam: f64, eta: f64, xi: f64) -> (f64, f64, f64) {
        match self {
            ReflectionKind::First => (wrap_angle(-lam), eta, -xi),
            ReflectionKind::Second => (wrap_angle(PI - lam), -eta, xi),
        }
    }

    /// The pattern (λ, ĥ, x̂) ↦ (−λ, −ĥ, x̂) and (π − λ, ĥ, −x̂) read literally;
    /// it matches the Cartesian sign patterns only for circular orbits.
    fn apply_literal(self, lam: f64, eta: f64, xi: f64) -> (f64, f64, f64) {
        match self {
            ReflectionKind::First => (wrap_angle(-lam), -eta, xi),
            ReflectionKind::Second => (wrap_angle(PI - lam), eta, -xi),
        }
    }
}

fn reflect_pairs(
    lam: &mut [f64],
    eta: &mut [f64],
    xi: &mut [f64],
    f: impl Fn(f64, f64, f64) -> (f64, f64, f64),
) {
    for i in 0..lam.len() {
        (lam[i], eta[i], xi[i]) = f(lam[i], eta[i], xi[i]);
    }
}

pub fn reflect_regularized_3b(c: &RadauRegularized, kind: ReflectionKind) -> RadauRegularized {
    let mut r = c.clone();
    reflect_pairs(&mut r.lam, &mut r.h_hat, &mut r.x_hat, |a, b, d| {
        kind.apply(a, b, d)
    });
    r
}

pub fn reflect_regularized_3b_literal(
    c: &RadauRegularized,
    kind: ReflectionKind,
) -> RadauRegularized {
    let mut r = c.clone();
    reflect_pairs(&mut r.lam, &mut r.h_hat, &mut r.x_hat, |a, b, d| {
        kind.apply_literal(a, b, d)
    });
    r
}

/// The two-planet reflection applied body by body to (Λ, λ̂, η, ξ), leaving (p, q) unchanged.
pub fn reflect_full_reduction(c: &FullRedCoords, kind: ReflectionKind) -> FullRedCoords {
    let mut r = c.clone();
    reflect_pairs(&mut r.lam, &mut r.eta, &mut r.xi, |a, b, d| {
        kind.apply(a, b, d)
    });
    r
}
