//! The two-body problem: Kepler's equation, orbital elements, and the Delaunay
//! and Poincaré charts (planar and spatial).

#![allow(non_snake_case)]

use std::f64::consts::{PI, SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    angle_in_plane, horizontal_rotation, horizontal_rotation_pq, oriented_angle, rot1, rot3,
    wrap_angle, Mat3, Vec3, EPS_NODE,
};

/// Eccentricities below this make perihelion-based angles undefined.
pub const EPS_ECC: f64 = 1e-10;

const NEWTON_MAX_ITER: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitalElements {
    pub a: f64,
    pub e: f64,
    pub p_dir: Vec3,
    pub c_vec: Vec3,
    pub ell: f64,
}

/// Spatial Delaunay coordinates of one body.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelaunayCoords {
    pub Lambda: f64,
    pub Gamma: f64,
    pub H: f64,
    pub ell: f64,
    pub g: f64,
    pub h: f64,
}

/// Spatial Poincaré coordinates of one body.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareCoords {
    pub Lambda: f64,
    pub lam: f64,
    pub eta: f64,
    pub xi: f64,
    pub p: f64,
    pub q: f64,
}

/// Planar Poincaré coordinates (Λ, λ, η, ξ) of one body.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarPoincare {
    pub Lambda: f64,
    pub lam: f64,
    pub eta: f64,
    pub xi: f64,
}

/// Planar Delaunay coordinates (Λ, Γ, ℓ, g) of one body.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarDelaunay {
    pub Lambda: f64,
    pub Gamma: f64,
    pub ell: f64,
    pub g: f64,
}

/// Solves `f(u) = target` for an increasing `f` with `f(u) − u` bounded by `width`.
fn solve_monotone(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    target: f64,
    width: f64,
    seed: f64,
) -> f64 {
    let mut u = seed;
    for _ in 0..NEWTON_MAX_ITER {
        let r = f(u) - target;
        let du = r / df(u);
        u -= du;
        if du.abs() <= 4.0 * f64::EPSILON * u.abs().max(1.0) {
            return u;
        }
    }
    let (mut lo, mut hi) = (target - width, target + width);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 2.0 * f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Splits an angle into a representative in (−π, π] and the removed multiple of 2π.
fn centered(angle: f64) -> (f64, f64) {
    let mut m = angle.rem_euclid(TAU);
    if m > PI {
        m -= TAU;
    }
    (m, angle - m)
}

/// Eccentric anomaly E with E − e sin E = ℓ.
pub fn solve_kepler(ell: f64, e: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&e) {
        return Err(Error::EccentricityOutOfRange(e));
    }
    if e == 0.0 {
        return Ok(ell);
    }
    let (m, shift) = centered(ell);
    let seed = m + 0.85 * e * m.sin().signum();
    let u = solve_monotone(|u| u - e * u.sin(), |u| 1.0 - e * u.cos(), m, e, seed);
    Ok(u + shift)
}

/// Eccentric longitude F with F − k sin F + h cos F = λ, where (k, h) = e(cos ϖ, sin ϖ).
fn solve_kepler_regular(lam: f64, k: f64, h: f64) -> f64 {
    let (m, shift) = centered(lam);
    let e = k.hypot(h);
    let u = solve_monotone(
        |u| u - k * u.sin() + h * u.cos(),
        |u| 1.0 - k * u.cos() - h * u.sin(),
        m,
        e,
        m,
    );
    u + shift
}

pub fn kepler_energy(Lambda: f64, rm: f64, cm: f64) -> f64 {
    -rm.powi(3) * cm * cm / (2.0 * Lambda * Lambda)
}

pub fn mean_motion(Lambda: f64, rm: f64, cm: f64) -> f64 {
    rm.powi(3) * cm * cm / Lambda.powi(3)
}

/// Λ = 𝔪√(𝔐a).
pub fn lambda_from_a(a: f64, rm: f64, cm: f64) -> f64 {
    rm * (cm * a).sqrt()
}

pub fn a_from_lambda(Lambda: f64, rm: f64, cm: f64) -> f64 {
    Lambda * Lambda / (rm * rm * cm)
}

/// Laplace vector (y×C)/(𝔪·𝔪𝔐) − x/|x|.
pub fn laplace_vector(y: Vec3, x: Vec3, rm: f64, cm: f64) -> Vec3 {
    let c = x.cross(y);
    y.cross(c) * (1.0 / (rm * rm * cm)) - x * (1.0 / x.norm())
}

pub fn elements_from_state(y: Vec3, x: Vec3, rm: f64, cm: f64) -> Result<OrbitalElements> {
    let r = x.norm();
    let energy = y.norm2() / (2.0 * rm) - rm * cm / r;
    if !(energy < 0.0) {
        return Err(Error::NotElliptic);
    }
    let c = x.cross(y);
    if c.norm() < EPS_NODE {
        return Err(Error::Rectilinear);
    }
    let a = -rm * cm / (2.0 * energy);
    let l = laplace_vector(y, x, rm, cm);
    let e = l.norm();
    if e >= 1.0 {
        return Err(Error::NotElliptic);
    }
    let p_dir = if e > 0.0 {
        l * (1.0 / e)
    } else {
        x * (1.0 / r)
    };
    let f = angle_in_plane(p_dir, x, c);
    let big_e =
        2.0 * ((1.0 - e).sqrt() * (0.5 * f).sin()).atan2((1.0 + e).sqrt() * (0.5 * f).cos());
    let ell = wrap_angle(big_e - e * big_e.sin());
    Ok(OrbitalElements {
        a,
        e,
        p_dir,
        c_vec: c,
        ell,
    })
}

/// e = √(1 − Γ²/Λ²) without cancellation.
fn eccentricity(Lambda: f64, Gamma: f64) -> f64 {
    ((Lambda - Gamma) * (Lambda + Gamma)).max(0.0).sqrt() / Lambda
}

fn check_planar_actions(Lambda: f64, Gamma: f64) -> Result<()> {
    if !(Lambda > 0.0 && Gamma > 0.0 && Gamma <= Lambda) {
        return Err(Error::InvalidActions(format!(
            "need Λ ≥ Γ > 0, got Λ = {Lambda}, Γ = {Gamma}"
        )));
    }
    Ok(())
}

/// Planar Delaunay map (Λ, Γ, ℓ, g) ↦ (ȳ, x̄) in the plane x₃ = 0.
pub fn planar_delaunay(d: &PlanarDelaunay, rm: f64, cm: f64) -> Result<(Vec3, Vec3)> {
    check_planar_actions(d.Lambda, d.Gamma)?;
    let e = eccentricity(d.Lambda, d.Gamma);
    let root = d.Gamma / d.Lambda;
    let a = a_from_lambda(d.Lambda, rm, cm);
    let big_e = solve_kepler(d.ell, e)?;
    let (s, c) = big_e.sin_cos();
    let x_pf = Vec3::new(a * (c - e), a * root * s, 0.0);
    let speed = mean_motion(d.Lambda, rm, cm) * a / (1.0 - e * c);
    let y_pf = Vec3::new(-s, root * c, 0.0) * (rm * speed);
    let r = rot3(d.g);
    Ok((r * y_pf, r * x_pf))
}

/// Inverse of [`planar_delaunay`] for a state in the plane x₃ = 0 with positive rotation.
pub fn planar_delaunay_forward(y: Vec3, x: Vec3, rm: f64, cm: f64) -> Result<PlanarDelaunay> {
    let el = elements_from_state(y, x, rm, cm)?;
    if el.c_vec[2] <= 0.0 {
        return Err(Error::ChartSingular(
            "orbit not positively oriented in its plane".into(),
        ));
    }
    if el.e < EPS_ECC {
        return Err(Error::ChartSingular("zero eccentricity".into()));
    }
    Ok(PlanarDelaunay {
        Lambda: lambda_from_a(el.a, rm, cm),
        Gamma: el.c_vec.norm(),
        ell: el.ell,
        g: wrap_angle(el.p_dir[1].atan2(el.p_dir[0])),
    })
}

pub fn delaunay_forward(y: Vec3, x: Vec3, rm: f64, cm: f64) -> Result<DelaunayCoords> {
    let el = elements_from_state(y, x, rm, cm)?;
    if el.e < EPS_ECC {
        return Err(Error::ChartSingular("zero eccentricity".into()));
    }
    let c = el.c_vec;
    let node = Vec3::K3.cross(c);
    if node.norm() < EPS_NODE * c.norm() {
        return Err(Error::ChartSingular("node k³×C vanishes".into()));
    }
    Ok(DelaunayCoords {
        Lambda: lambda_from_a(el.a, rm, cm),
        Gamma: c.norm(),
        H: c[2],
        ell: el.ell,
        g: angle_in_plane(node, el.p_dir, c),
        h: oriented_angle(Vec3::K1, node, Vec3::K3)?,
    })
}

pub fn delaunay_inverse(d: &DelaunayCoords, rm: f64, cm: f64) -> Result<(Vec3, Vec3)> {
    if !(d.Lambda >= d.Gamma && d.Gamma >= d.H.abs() && d.Gamma > 0.0) {
        return Err(Error::InvalidActions(format!(
            "need Λ ≥ Γ ≥ |H|, Γ > 0; got ({}, {}, {})",
            d.Lambda, d.Gamma, d.H
        )));
    }
    let (yb, xb) = planar_delaunay(
        &PlanarDelaunay {
            Lambda: d.Lambda,
            Gamma: d.Gamma,
            ell: d.ell,
            g: d.g,
        },
        rm,
        cm,
    )?;
    let m = rot3(d.h) * rot1((d.H / d.Gamma).acos());
    Ok((m * yb, m * xb))
}

pub fn kepler_flow(d: &DelaunayCoords, t: f64, rm: f64, cm: f64) -> DelaunayCoords {
    DelaunayCoords {
        ell: wrap_angle(d.ell + mean_motion(d.Lambda, rm, cm) * t),
        ..*d
    }
}

pub fn poincare_forward(d: &DelaunayCoords) -> PoincareCoords {
    let varpi = d.g + d.h;
    let re = (2.0 * (d.Lambda - d.Gamma)).max(0.0).sqrt();
    let ri = (2.0 * (d.Gamma - d.H)).max(0.0).sqrt();
    PoincareCoords {
        Lambda: d.Lambda,
        lam: wrap_angle(d.ell + varpi),
        eta: re * varpi.cos(),
        xi: -re * varpi.sin(),
        p: ri * d.h.cos(),
        q: -ri * d.h.sin(),
    }
}

/// Algebraic inverse of [`poincare_forward`]; angles of vanishing pairs are set to 0.
pub fn poincare_inverse(pc: &PoincareCoords) -> Result<DelaunayCoords> {
    let (Gamma, H) = poincare_actions(pc)?;
    let varpi = (-pc.xi).atan2(pc.eta);
    let h = (-pc.q).atan2(pc.p);
    Ok(DelaunayCoords {
        Lambda: pc.Lambda,
        Gamma,
        H,
        ell: wrap_angle(pc.lam - varpi),
        g: wrap_angle(varpi - h),
        h: wrap_angle(h),
    })
}

fn poincare_actions(pc: &PoincareCoords) -> Result<(f64, f64)> {
    let Gamma = pc.Lambda - 0.5 * (pc.eta * pc.eta + pc.xi * pc.xi);
    if !(Gamma > 0.0) {
        return Err(Error::ActionOverflow("η²+ξ² ≥ 2Λ".into()));
    }
    let H = Gamma - 0.5 * (pc.p * pc.p + pc.q * pc.q);
    if !(Gamma + H > 0.0) {
        return Err(Error::ActionOverflow("p²+q² too large for Γ".into()));
    }
    Ok((Gamma, H))
}

/// Planar Poincaré map (Λ, λ, η, ξ) ↦ (ȳ, x̄), regular at η = ξ = 0.
pub fn planar_poincare(c: &PlanarPoincare, rm: f64, cm: f64) -> Result<(Vec3, Vec3)> {
    let L = c.Lambda;
    let Gamma = L - 0.5 * (c.eta * c.eta + c.xi * c.xi);
    if !(L > 0.0 && Gamma > 0.0) {
        return Err(Error::ActionOverflow("η²+ξ² ≥ 2Λ".into()));
    }
    let factor = (L + Gamma).sqrt() / (L * SQRT_2);
    let (k, h) = (c.eta * factor, -c.xi * factor);
    let beta = L / (L + Gamma);
    let a = a_from_lambda(L, rm, cm);
    let f = solve_kepler_regular(c.lam, k, h);
    let (s, co) = f.sin_cos();
    let x = Vec3::new(
        a * ((1.0 - h * h * beta) * co + h * k * beta * s - k),
        a * ((1.0 - k * k * beta) * s + h * k * beta * co - h),
        0.0,
    );
    let r = a * (1.0 - k * co - h * s);
    let scale = rm * mean_motion(L, rm, cm) * a * a / r;
    let y = Vec3::new(
        scale * (h * k * beta * co - (1.0 - h * h * beta) * s),
        scale * ((1.0 - k * k * beta) * co - h * k * beta * s),
        0.0,
    );
    Ok((y, x))
}

/// Inverse of [`planar_poincare`] for a positively oriented state in the plane x₃ = 0.
pub fn planar_poincare_forward(y: Vec3, x: Vec3, rm: f64, cm: f64) -> Result<PlanarPoincare> {
    let r = x.norm();
    let energy = y.norm2() / (2.0 * rm) - rm * cm / r;
    if !(energy < 0.0) {
        return Err(Error::NotElliptic);
    }
    let cz = x[0] * y[1] - x[1] * y[0];
    if !(cz > EPS_NODE) {
        return Err(Error::Rectilinear);
    }
    let a = -rm * cm / (2.0 * energy);
    let L = lambda_from_a(a, rm, cm);
    let Gamma = cz;
    let hz = cz / rm;
    let (v1, v2) = (y[0] / rm, y[1] / rm);
    let k = v2 * hz / cm - x[0] / r;
    let h = -v1 * hz / cm - x[1] / r;
    let beta = L / (L + Gamma);
    let root = Gamma / L;
    let cos_f = k + ((1.0 - k * k * beta) * x[0] - h * k * beta * x[1]) / (a * root);
    let sin_f = h + ((1.0 - h * h * beta) * x[1] - h * k * beta * x[0]) / (a * root);
    let f = sin_f.atan2(cos_f);
    let scale = L * SQRT_2 / (L + Gamma).sqrt();
    Ok(PlanarPoincare {
        Lambda: L,
        lam: wrap_angle(f - k * f.sin() + h * f.cos()),
        eta: k * scale,
        xi: -h * scale,
    })
}

/// Regular rotation carrying the equatorial plane to the orbital plane.
fn poincare_rotation(p: f64, q: f64, Gamma: f64, H: f64) -> Mat3 {
    let s = (0.5 * (Gamma + H)).sqrt() / Gamma;
    horizontal_rotation(p, q, 1.0 / Gamma, s, 1.0)
}

/// Spatial Poincaré map, regular at vanishing eccentricity and inclination.
pub fn poincare_to_cartesian(pc: &PoincareCoords, rm: f64, cm: f64) -> Result<(Vec3, Vec3)> {
    let (Gamma, H) = poincare_actions(pc)?;
    let (yb, xb) = planar_poincare(
        &PlanarPoincare {
            Lambda: pc.Lambda,
            lam: pc.lam,
            eta: pc.eta,
            xi: pc.xi,
        },
        rm,
        cm,
    )?;
    let m = poincare_rotation(pc.p, pc.q, Gamma, H);
    Ok((m * yb, m * xb))
}

pub fn cartesian_to_poincare(y: Vec3, x: Vec3, rm: f64, cm: f64) -> Result<PoincareCoords> {
    let c = x.cross(y);
    let Gamma = c.norm();
    if Gamma < EPS_NODE {
        return Err(Error::Rectilinear);
    }
    let H = c[2];
    if !(Gamma + H > EPS_NODE * Gamma) {
        return Err(Error::ChartSingular("retrograde equatorial orbit".into()));
    }
    let s = (0.5 * (Gamma + H)).sqrt() / Gamma;
    let (p, q) = horizontal_rotation_pq(c * (1.0 / Gamma), s, 1.0);
    let mt = poincare_rotation(p, q, Gamma, H).transpose();
    let pl = planar_poincare_forward(mt * y, mt * x, rm, cm)?;
    Ok(PoincareCoords {
        Lambda: pl.Lambda,
        lam: pl.lam,
        eta: pl.eta,
        xi: pl.xi,
        p,
        q,
    })
}
