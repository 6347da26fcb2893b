//! Reductions of the total angular momentum built on nodes: the Jacobi–Radau
//! chart for two planets and the Deprit chart for any number of planets.

#![allow(non_snake_case)]

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    angle_in_plane, frame_from_axes, frame_rot, rot1, wrap_angle, Mat3, Vec3, EPS_NODE,
};
use crate::kepler::{
    planar_delaunay, planar_delaunay_forward, planar_poincare, planar_poincare_forward,
    PlanarDelaunay, PlanarPoincare,
};
use crate::phase_space::{total_angular_momentum, HelioState, MassParams};

/// Slack allowed on a law-of-cosines value before it counts as a triangle violation.
const TRIANGLE_SLACK: f64 = 1e-12;

/// Cosine of the angle between sides `a` and `b` of a triangle with third side `opp`.
pub(crate) fn triangle_cos(a: f64, b: f64, opp: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && opp >= 0.0) {
        return Err(Error::TriangleViolation(format!("sides ({a}, {b}, {opp})")));
    }
    let c = (a * a + b * b - opp * opp) / (2.0 * a * b);
    if !(c.abs() <= 1.0 + TRIANGLE_SLACK) {
        return Err(Error::TriangleViolation(format!("sides ({a}, {b}, {opp})")));
    }
    Ok(c.clamp(-1.0, 1.0))
}

/// True when `u × v` is negligible relative to |u||v|.
pub(crate) fn parallel(u: Vec3, v: Vec3) -> bool {
    u.cross(v).norm() < EPS_NODE * u.norm() * v.norm()
}

fn check_n2(hs: &HelioState) -> Result<()> {
    if hs.n() != 2 {
        return Err(Error::UnsupportedBodyCount(hs.n()));
    }
    Ok(())
}

/// Jacobi–Radau coordinates for two planets at fixed |C| = G.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiRadauCoords {
    pub Lambda: [f64; 2],
    pub Gamma: [f64; 2],
    pub ell: [f64; 2],
    pub g: [f64; 2],
    pub G: f64,
}

impl JacobiRadauCoords {
    /// (Λ₁, Λ₂, Γ₁, Γ₂, ℓ₁, ℓ₂, g₁, g₂).
    pub fn to_vec(&self) -> Vec<f64> {
        [self.Lambda, self.Gamma, self.ell, self.g].concat()
    }

    pub fn from_vec(v: &[f64], G: f64) -> Self {
        Self {
            Lambda: [v[0], v[1]],
            Gamma: [v[2], v[3]],
            ell: [v[4], v[5]],
            g: [v[6], v[7]],
            G,
        }
    }

    /// Angle ι = π − (ι₁ + ι₂) of the triangle (C⁽¹⁾, C⁽²⁾, C) opposite to C.
    pub fn mutual_inclination(&self) -> Result<f64> {
        Ok(triangle_cos(self.Gamma[0], self.Gamma[1], self.G)?.acos())
    }
}

/// Regularized Jacobi–Radau coordinates (Λ, λ̂, ĥ, x̂) at fixed G.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadauRegularized {
    pub Lambda: [f64; 2],
    pub lam: [f64; 2],
    pub h_hat: [f64; 2],
    pub x_hat: [f64; 2],
    pub G: f64,
}

impl RadauRegularized {
    /// (Λ₁, Λ₂, ĥ₁, ĥ₂, λ̂₁, λ̂₂, x̂₁, x̂₂).
    pub fn to_vec(&self) -> Vec<f64> {
        [self.Lambda, self.h_hat, self.lam, self.x_hat].concat()
    }

    pub fn from_vec(v: &[f64], G: f64) -> Self {
        Self {
            Lambda: [v[0], v[1]],
            h_hat: [v[2], v[3]],
            lam: [v[4], v[5]],
            x_hat: [v[6], v[7]],
            G,
        }
    }
}

/// Tilts (ι₁, ι₂) of the two orbital planes about k¹ in the invariant frame.
fn radau_tilts(Gamma: [f64; 2], G: f64) -> Result<(f64, f64)> {
    let c1 = triangle_cos(Gamma[0], G, Gamma[1])?;
    let c2 = triangle_cos(Gamma[1], G, Gamma[0])?;
    Ok((c1.acos(), c2.acos()))
}

pub fn radau_inverse(c: &JacobiRadauCoords, mp: &MassParams) -> Result<HelioState> {
    let (i1, i2) = radau_tilts(c.Gamma, c.G)?;
    let frames = [rot1(i1), rot1(-i2)];
    let mut hs = HelioState {
        y: vec![Vec3::ZERO; 2],
        x: vec![Vec3::ZERO; 2],
    };
    for i in 0..2 {
        let (rm, cm) = mp.kepler_masses(i);
        let d = PlanarDelaunay {
            Lambda: c.Lambda[i],
            Gamma: c.Gamma[i],
            ell: c.ell[i],
            g: c.g[i],
        };
        let (yb, xb) = planar_delaunay(&d, rm, cm)?;
        hs.y[i] = frames[i] * yb;
        hs.x[i] = frames[i] * xb;
    }
    Ok(hs)
}

/// Rotation whose columns are (ν̂, Ĉ×ν̂, Ĉ) with ν = C × C⁽¹⁾; its transpose
/// carries a two-planet state to the manifold where radau_inverse lands.
pub fn radau_frame(hs: &HelioState) -> Result<Mat3> {
    check_n2(hs)?;
    let c = total_angular_momentum(hs);
    let c1 = hs.x[0].cross(hs.y[0]);
    if parallel(c, c1) {
        return Err(Error::ChartSingular("node C×C⁽¹⁾ vanishes".into()));
    }
    frame_from_axes(c.cross(c1), c).ok_or(Error::ChartSingular("vanishing C".into()))
}

/// Per-body frames (first axis ν = C × C⁽¹⁾, third axis Ĉ⁽ⁱ⁾) and G.
fn radau_body_frames(hs: &HelioState) -> Result<([Mat3; 2], f64)> {
    check_n2(hs)?;
    let c = total_angular_momentum(hs);
    let cs = hs.angular_momenta();
    if parallel(c, cs[0]) || parallel(c, cs[1]) {
        return Err(Error::ChartSingular("node C×C⁽ⁱ⁾ vanishes".into()));
    }
    let nu = c.cross(cs[0]);
    let f = |ci: Vec3| frame_from_axes(nu, ci).ok_or(Error::ChartSingular("vanishing C⁽ⁱ⁾".into()));
    Ok(([f(cs[0])?, f(cs[1])?], c.norm()))
}

pub fn radau_forward(hs: &HelioState, mp: &MassParams) -> Result<JacobiRadauCoords> {
    let (frames, G) = radau_body_frames(hs)?;
    let mut out = JacobiRadauCoords {
        Lambda: [0.0; 2],
        Gamma: [0.0; 2],
        ell: [0.0; 2],
        g: [0.0; 2],
        G,
    };
    for i in 0..2 {
        let (rm, cm) = mp.kepler_masses(i);
        let ft = frames[i].transpose();
        let d = planar_delaunay_forward(ft * hs.y[i], ft * hs.x[i], rm, cm)?;
        out.Lambda[i] = d.Lambda;
        out.Gamma[i] = d.Gamma;
        out.ell[i] = d.ell;
        out.g[i] = d.g;
    }
    Ok(out)
}

pub fn radau_regularize(c: &JacobiRadauCoords) -> RadauRegularized {
    let mut r = RadauRegularized {
        Lambda: c.Lambda,
        lam: [0.0; 2],
        h_hat: [0.0; 2],
        x_hat: [0.0; 2],
        G: c.G,
    };
    for i in 0..2 {
        let rho = (2.0 * (c.Lambda[i] - c.Gamma[i])).max(0.0).sqrt();
        r.h_hat[i] = rho * c.g[i].cos();
        r.x_hat[i] = -rho * c.g[i].sin();
        r.lam[i] = wrap_angle(c.ell[i] + c.g[i]);
    }
    r
}

/// Inverse of [`radau_regularize`]; the argument of a vanishing pair is set to 0.
pub fn radau_deregularize(r: &RadauRegularized) -> Result<JacobiRadauCoords> {
    let mut c = JacobiRadauCoords {
        Lambda: r.Lambda,
        Gamma: [0.0; 2],
        ell: [0.0; 2],
        g: [0.0; 2],
        G: r.G,
    };
    for i in 0..2 {
        c.Gamma[i] = r.Lambda[i] - 0.5 * (r.h_hat[i].powi(2) + r.x_hat[i].powi(2));
        if !(c.Gamma[i] > 0.0) {
            return Err(Error::ActionOverflow("ĥ²+x̂² ≥ 2Λ".into()));
        }
        let g = (-r.x_hat[i]).atan2(r.h_hat[i]);
        c.g[i] = wrap_angle(g);
        c.ell[i] = wrap_angle(r.lam[i] - g);
    }
    Ok(c)
}

/// Regularized Radau map, regular at vanishing eccentricities.
pub fn radau_regularized_inverse(r: &RadauRegularized, mp: &MassParams) -> Result<HelioState> {
    let mut Gamma = [0.0; 2];
    for i in 0..2 {
        Gamma[i] = r.Lambda[i] - 0.5 * (r.h_hat[i].powi(2) + r.x_hat[i].powi(2));
        if !(Gamma[i] > 0.0) {
            return Err(Error::ActionOverflow("ĥ²+x̂² ≥ 2Λ".into()));
        }
    }
    let (i1, i2) = radau_tilts(Gamma, r.G)?;
    let frames = [rot1(i1), rot1(-i2)];
    let mut hs = HelioState {
        y: vec![Vec3::ZERO; 2],
        x: vec![Vec3::ZERO; 2],
    };
    for i in 0..2 {
        let (rm, cm) = mp.kepler_masses(i);
        let pp = PlanarPoincare {
            Lambda: r.Lambda[i],
            lam: r.lam[i],
            eta: r.h_hat[i],
            xi: r.x_hat[i],
        };
        let (yb, xb) = planar_poincare(&pp, rm, cm)?;
        hs.y[i] = frames[i] * yb;
        hs.x[i] = frames[i] * xb;
    }
    Ok(hs)
}

pub fn radau_regularized_forward(hs: &HelioState, mp: &MassParams) -> Result<RadauRegularized> {
    let (frames, G) = radau_body_frames(hs)?;
    let mut r = RadauRegularized {
        Lambda: [0.0; 2],
        lam: [0.0; 2],
        h_hat: [0.0; 2],
        x_hat: [0.0; 2],
        G,
    };
    for i in 0..2 {
        let (rm, cm) = mp.kepler_masses(i);
        let ft = frames[i].transpose();
        let pp = planar_poincare_forward(ft * hs.y[i], ft * hs.x[i], rm, cm)?;
        r.Lambda[i] = pp.Lambda;
        r.lam[i] = pp.lam;
        r.h_hat[i] = pp.eta;
        r.x_hat[i] = pp.xi;
    }
    Ok(r)
}

/// Deprit coordinates with polar planar variables (R, Φ, r, φ) per body.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepritCoords {
    pub R: Vec<f64>,
    pub Phi: Vec<f64>,
    pub C3: f64,
    /// Ψ₀ = G, Ψ₁, …, Ψ_{n−2}.
    pub Psi: Vec<f64>,
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    pub zeta: f64,
    /// ψ₀ = g, ψ₁, …, ψ_{n−2}.
    pub psi: Vec<f64>,
}

impl DepritCoords {
    pub fn n(&self) -> usize {
        self.R.len()
    }

    /// Actions (R, Φ, C₃, Ψ) followed by angles (r, φ, ζ, ψ).
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = [self.R.as_slice(), &self.Phi, &[self.C3], &self.Psi].concat();
        v.extend([self.r.as_slice(), &self.phi, &[self.zeta], &self.psi].concat());
        v
    }

    pub fn from_vec(v: &[f64], n: usize) -> Self {
        let h = 3 * n;
        Self {
            R: v[..n].to_vec(),
            Phi: v[n..2 * n].to_vec(),
            C3: v[2 * n],
            Psi: v[2 * n + 1..h].to_vec(),
            r: v[h..h + n].to_vec(),
            phi: v[h + n..h + 2 * n].to_vec(),
            zeta: v[h + 2 * n],
            psi: v[h + 2 * n + 1..2 * h].to_vec(),
        }
    }
}

/// Deprit coordinates with planar Delaunay variables (Λ, Γ, ℓ, γ) per body.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepritPlanetaryCoords {
    pub Lambda: Vec<f64>,
    pub Gamma: Vec<f64>,
    pub C3: f64,
    pub Psi: Vec<f64>,
    pub ell: Vec<f64>,
    pub gamma: Vec<f64>,
    pub zeta: f64,
    pub psi: Vec<f64>,
}

impl DepritPlanetaryCoords {
    pub fn n(&self) -> usize {
        self.Lambda.len()
    }

    /// Actions (Λ, Γ, C₃, Ψ) followed by angles (ℓ, γ, ζ, ψ).
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = [self.Lambda.as_slice(), &self.Gamma, &[self.C3], &self.Psi].concat();
        v.extend([self.ell.as_slice(), &self.gamma, &[self.zeta], &self.psi].concat());
        v
    }

    pub fn from_vec(v: &[f64], n: usize) -> Self {
        let d = DepritCoords::from_vec(v, n);
        Self {
            Lambda: d.R,
            Gamma: d.Phi,
            C3: d.C3,
            Psi: d.Psi,
            ell: d.r,
            gamma: d.phi,
            zeta: d.zeta,
            psi: d.psi,
        }
    }
}

/// Node-frame data shared by both Deprit variants.
struct DepritFrame {
    C3: f64,
    Psi: Vec<f64>,
    zeta: f64,
    psi: Vec<f64>,
    /// Frame of body i: first axis νᵢ, third axis Ĉ⁽ⁱ⁾.
    frames: Vec<Mat3>,
}

fn deprit_geometry(hs: &HelioState) -> Result<DepritFrame> {
    let n = hs.n();
    if n < 2 {
        return Err(Error::UnsupportedBodyCount(n));
    }
    let cs = hs.angular_momenta();
    // s[j] = Σ_{i ≥ j} C⁽ⁱ⁾ (zero-based), so s[0] = C
    let mut s = vec![Vec3::ZERO; n];
    s[n - 1] = cs[n - 1];
    for j in (0..n - 1).rev() {
        s[j] = s[j + 1] + cs[j];
    }
    // nu[j] for j = 0..=n with nu[0] = k³ × C
    let mut nu = vec![Vec3::ZERO; n + 1];
    for j in 1..n {
        if parallel(s[j - 1], cs[j - 1]) {
            return Err(Error::NodeSingular(j));
        }
        nu[j] = s[j - 1].cross(cs[j - 1]);
    }
    nu[n] = -nu[n - 1];
    if s[0].norm() < EPS_NODE {
        return Err(Error::NodeSingular(0));
    }
    // on C ∥ ±k³ the node ν₀ is taken along k¹, so ζ = 0
    nu[0] = if parallel(Vec3::K3, s[0]) {
        Vec3::K1
    } else {
        Vec3::K3.cross(s[0])
    };
    let zeta = angle_in_plane(Vec3::K1, nu[0], Vec3::K3);
    let psi = (1..n)
        .map(|j| angle_in_plane(nu[j - 1], nu[j], s[j - 1]))
        .collect();
    let frames = (0..n)
        .map(|i| frame_from_axes(nu[i + 1], cs[i]).ok_or(Error::NodeSingular(i + 1)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DepritFrame {
        C3: s[0][2],
        Psi: s[..n - 1].iter().map(|v| v.norm()).collect(),
        zeta,
        psi,
        frames,
    })
}

/// Walks the node chain F₀ → A₁ → F₁, A₂ → … and returns the frame of each body.
fn deprit_frames(Phi: &[f64], C3: f64, Psi: &[f64], zeta: f64, psi: &[f64]) -> Result<Vec<Mat3>> {
    let n = Phi.len();
    if n < 2 || Psi.len() != n - 1 || psi.len() != n - 1 {
        return Err(Error::UnsupportedBodyCount(n));
    }
    let G = Psi[0];
    if !(G > 0.0 && C3.abs() <= G * (1.0 + TRIANGLE_SLACK)) {
        return Err(Error::TriangleViolation(format!(
            "|C₃| = {} > G = {G}",
            C3.abs()
        )));
    }
    // Ψ_{n−1} := Φ_n closes the chain
    let psi_act = |j: usize| if j + 1 == n { Phi[n - 1] } else { Psi[j] };
    let mut a = frame_rot(zeta, (C3 / G).clamp(-1.0, 1.0).acos());
    let mut frames = Vec::with_capacity(n);
    for j in 1..n {
        let (sj, sj1) = (psi_act(j - 1), psi_act(j));
        let iota = triangle_cos(sj, Phi[j - 1], sj1)?.acos();
        let iota_star = triangle_cos(sj, sj1, Phi[j - 1])?.acos();
        frames.push(a * frame_rot(psi[j - 1], iota));
        a = a * frame_rot(psi[j - 1], -iota_star);
    }
    frames.push(a * frame_rot(PI, 0.0));
    Ok(frames)
}

fn polar_planar(R: f64, Phi: f64, r: f64, phi: f64) -> Result<(Vec3, Vec3)> {
    if !(r > 0.0) {
        return Err(Error::InvalidActions(format!(
            "radius {r} must be positive"
        )));
    }
    let (s, c) = phi.sin_cos();
    let e_r = Vec3::new(c, s, 0.0);
    let e_t = Vec3::new(-s, c, 0.0);
    Ok((e_r * R + e_t * (Phi / r), e_r * r))
}

pub fn deprit_forward(hs: &HelioState) -> Result<DepritCoords> {
    let geo = deprit_geometry(hs)?;
    let n = hs.n();
    let mut c = DepritCoords {
        R: vec![0.0; n],
        Phi: vec![0.0; n],
        C3: geo.C3,
        Psi: geo.Psi,
        r: vec![0.0; n],
        phi: vec![0.0; n],
        zeta: geo.zeta,
        psi: geo.psi,
    };
    for i in 0..n {
        let (y, x) = (hs.y[i], hs.x[i]);
        c.r[i] = x.norm();
        c.R[i] = y.dot(x) / c.r[i];
        c.Phi[i] = x.cross(y).norm();
        let xb = geo.frames[i].transpose() * x;
        c.phi[i] = wrap_angle(xb[1].atan2(xb[0]));
    }
    Ok(c)
}

pub fn deprit_inverse(c: &DepritCoords) -> Result<HelioState> {
    let frames = deprit_frames(&c.Phi, c.C3, &c.Psi, c.zeta, &c.psi)?;
    let n = c.n();
    let mut hs = HelioState {
        y: vec![Vec3::ZERO; n],
        x: vec![Vec3::ZERO; n],
    };
    for i in 0..n {
        let (yb, xb) = polar_planar(c.R[i], c.Phi[i], c.r[i], c.phi[i])?;
        hs.y[i] = frames[i] * yb;
        hs.x[i] = frames[i] * xb;
    }
    Ok(hs)
}

/// The frame chain with the first auxiliary axis along ν_j instead of −ν_j
/// for j ≥ 1, i.e. ψ_j shifted by π. Symplectic but not inverse to [`deprit_forward`] for n ≥ 3.
pub fn deprit_inverse_literal(c: &DepritCoords) -> Result<HelioState> {
    let mut shifted = c.clone();
    for p in shifted.psi.iter_mut().skip(1) {
        *p += PI;
    }
    deprit_inverse(&shifted)
}

pub fn deprit_planetary_forward(hs: &HelioState, mp: &MassParams) -> Result<DepritPlanetaryCoords> {
    let geo = deprit_geometry(hs)?;
    let n = hs.n();
    let mut c = DepritPlanetaryCoords {
        Lambda: vec![0.0; n],
        Gamma: vec![0.0; n],
        C3: geo.C3,
        Psi: geo.Psi,
        ell: vec![0.0; n],
        gamma: vec![0.0; n],
        zeta: geo.zeta,
        psi: geo.psi,
    };
    for i in 0..n {
        let (rm, cm) = mp.kepler_masses(i);
        let ft = geo.frames[i].transpose();
        let d = planar_delaunay_forward(ft * hs.y[i], ft * hs.x[i], rm, cm)?;
        c.Lambda[i] = d.Lambda;
        c.Gamma[i] = d.Gamma;
        c.ell[i] = d.ell;
        c.gamma[i] = d.g;
    }
    Ok(c)
}

pub fn deprit_planetary(c: &DepritPlanetaryCoords, mp: &MassParams) -> Result<HelioState> {
    let frames = deprit_frames(&c.Gamma, c.C3, &c.Psi, c.zeta, &c.psi)?;
    let n = c.n();
    let mut hs = HelioState {
        y: vec![Vec3::ZERO; n],
        x: vec![Vec3::ZERO; n],
    };
    for i in 0..n {
        let (rm, cm) = mp.kepler_masses(i);
        let d = PlanarDelaunay {
            Lambda: c.Lambda[i],
            Gamma: c.Gamma[i],
            ell: c.ell[i],
            g: c.gamma[i],
        };
        let (yb, xb) = planar_delaunay(&d, rm, cm)?;
        hs.y[i] = frames[i] * yb;
        hs.x[i] = frames[i] * xb;
    }
    Ok(hs)
}
