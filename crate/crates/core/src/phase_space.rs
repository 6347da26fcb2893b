//! Cartesian phase space of the sun and n planets, the heliocentric and Jacobi
//! reductions of the linear momentum, and the classical integrals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Mat3, Vec3};

/// Mutual distances below this raise [`Error::Collision`].
pub const EPS_COLL: f64 = 1e-10;

/// Sun mass `m0`, perturbation parameter `mu`, planet masses `m` (planet i weighs μ·mᵢ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassParams {
    pub m0: f64,
    pub mu: f64,
    pub m: Vec<f64>,
}

impl MassParams {
    pub fn new(m0: f64, mu: f64, m: Vec<f64>) -> Result<Self> {
        let ok = m0 > 0.0 && mu >= 0.0 && !m.is_empty() && m.iter().all(|&v| v > 0.0);
        if !ok || !m0.is_finite() || !mu.is_finite() {
            return Err(Error::Parse(
                "masses must be positive and μ non-negative".into(),
            ));
        }
        Ok(MassParams { m0, mu, m })
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn with_mu(&self, mu: f64) -> MassParams {
        MassParams { mu, ..self.clone() }
    }

    /// Heliocentric reduced mass 𝔪ᵢ = m₀mᵢ/(m₀+μmᵢ).
    pub fn red_mass(&self, i: usize) -> f64 {
        self.m0 * self.m[i] / (self.m0 + self.mu * self.m[i])
    }

    /// Heliocentric central mass 𝔐ᵢ = m₀+μmᵢ.
    pub fn central_mass(&self, i: usize) -> f64 {
        self.m0 + self.mu * self.m[i]
    }

    /// (𝔪ᵢ, 𝔐ᵢ).
    pub fn kepler_masses(&self, i: usize) -> (f64, f64) {
        (self.red_mass(i), self.central_mass(i))
    }

    /// Jacobi masses (𝔪̃ᵢ, 𝔐̃ᵢ) for the three-body case.
    pub fn jacobi_masses(&self, i: usize) -> (f64, f64) {
        let (m0, mu) = (self.m0, self.mu);
        match i {
            0 => self.kepler_masses(0),
            _ => {
                let (m1, m2) = (self.m[0], self.m[1]);
                let inner = m0 + mu * m1;
                let total = inner + mu * m2;
                (m2 * inner / total, m0 * total / inner)
            }
        }
    }

    /// The coefficient μm₁/(m₀+μm₁) of the Jacobi change.
    fn jacobi_eps(&self) -> f64 {
        self.mu * self.m[0] / (self.m0 + self.mu * self.m[0])
    }
}

/// Momenta and positions of the sun (index 0) and the planets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullState {
    pub p: Vec<Vec3>,
    pub q: Vec<Vec3>,
}

/// Heliocentric (or Jacobi) momenta `y` and positions `x` of the planets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelioState {
    pub y: Vec<Vec3>,
    pub x: Vec<Vec3>,
}

impl HelioState {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Flattened as (y⁽¹⁾…y⁽ⁿ⁾, x⁽¹⁾…x⁽ⁿ⁾), momenta first.
    pub fn to_flat(&self) -> Vec<f64> {
        self.y.iter().chain(&self.x).flat_map(|v| v.0).collect()
    }

    pub fn from_flat(v: &[f64]) -> HelioState {
        let n = v.len() / 6;
        let vecs: Vec<Vec3> = v.chunks(3).map(|c| Vec3([c[0], c[1], c[2]])).collect();
        HelioState {
            y: vecs[..n].to_vec(),
            x: vecs[n..].to_vec(),
        }
    }

    /// Applies the same matrix to every momentum and position.
    pub fn transform(&self, m: &Mat3) -> HelioState {
        HelioState {
            y: self.y.iter().map(|&v| *m * v).collect(),
            x: self.x.iter().map(|&v| *m * v).collect(),
        }
    }

    /// Componentwise sign pattern `r` on momenta and `s` on positions.
    pub fn reflect(&self, r: [f64; 3], s: [f64; 3]) -> HelioState {
        let f = |v: &Vec3, k: [f64; 3]| Vec3([v[0] * k[0], v[1] * k[1], v[2] * k[2]]);
        HelioState {
            y: self.y.iter().map(|v| f(v, r)).collect(),
            x: self.x.iter().map(|v| f(v, s)).collect(),
        }
    }

    pub fn max_abs_diff(&self, o: &HelioState) -> f64 {
        self.to_flat()
            .iter()
            .zip(o.to_flat())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Angular momenta C⁽ⁱ⁾ = x⁽ⁱ⁾ × y⁽ⁱ⁾.
    pub fn angular_momenta(&self) -> Vec<Vec3> {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(x, y)| x.cross(*y))
            .collect()
    }
}

impl FullState {
    pub fn to_flat(&self) -> Vec<f64> {
        self.p.iter().chain(&self.q).flat_map(|v| v.0).collect()
    }

    pub fn from_flat(v: &[f64]) -> FullState {
        let n = v.len() / 6;
        let vecs: Vec<Vec3> = v.chunks(3).map(|c| Vec3([c[0], c[1], c[2]])).collect();
        FullState {
            p: vecs[..n].to_vec(),
            q: vecs[n..].to_vec(),
        }
    }
}

/// Total linear momentum, angular momentum and energy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Integrals {
    pub p: Vec3,
    pub c: Vec3,
    pub g: f64,
    pub c3: f64,
    pub e: f64,
}

fn inv_dist(a: Vec3, b: Vec3) -> Result<f64> {
    let d = (a - b).norm();
    if d < EPS_COLL {
        return Err(Error::Collision);
    }
    Ok(1.0 / d)
}

pub fn hamiltonian_full(s: &FullState, mp: &MassParams) -> Result<f64> {
    let n = mp.n();
    let (m0, mu) = (mp.m0, mp.mu);
    let mut h = mu * s.p[0].norm2() / (2.0 * m0);
    for i in 1..=n {
        let mi = mp.m[i - 1];
        h += s.p[i].norm2() / (2.0 * mi) - m0 * mi * inv_dist(s.q[0], s.q[i])?;
    }
    for i in 1..=n {
        for j in i + 1..=n {
            h -= mu * mp.m[i - 1] * mp.m[j - 1] * inv_dist(s.q[i], s.q[j])?;
        }
    }
    Ok(h)
}

pub fn to_heliocentric(s: &FullState) -> HelioState {
    HelioState {
        y: s.p[1..].to_vec(),
        x: s.q[1..].iter().map(|&q| q - s.q[0]).collect(),
    }
}

/// Lift to the slice q⁽⁰⁾ = 0, P = 0.
pub fn from_heliocentric(hs: &HelioState) -> FullState {
    let p0 = hs.y.iter().fold(Vec3::ZERO, |a, &v| a - v);
    FullState {
        p: std::iter::once(p0).chain(hs.y.iter().copied()).collect(),
        q: std::iter::once(Vec3::ZERO)
            .chain(hs.x.iter().copied())
            .collect(),
    }
}

/// Heliocentric change on the whole phase space: (p, q) ↦ (y⁽⁰⁾=P, y, x⁽⁰⁾=q⁽⁰⁾, x).
pub fn heliocentric_linear(s: &FullState) -> FullState {
    let total = s.p.iter().fold(Vec3::ZERO, |a, &v| a + v);
    let mut y = s.p.clone();
    y[0] = total;
    let mut x = s.q.clone();
    for xi in x.iter_mut().skip(1) {
        *xi -= s.q[0];
    }
    FullState { p: y, q: x }
}

pub fn heliocentric_linear_inverse(c: &FullState) -> FullState {
    let rest = c.p[1..].iter().fold(Vec3::ZERO, |a, &v| a + v);
    let mut p = c.p.clone();
    p[0] = c.p[0] - rest;
    let mut q = c.q.clone();
    for qi in q.iter_mut().skip(1) {
        *qi += c.q[0];
    }
    FullState { p, q }
}

/// Keplerian part Σ(|y|²/2𝔪 − 𝔪𝔐/|x|) with the given per-body masses.
pub fn kepler_part(hs: &HelioState, masses: &[(f64, f64)]) -> Result<f64> {
    let mut h = 0.0;
    for (i, &(rm, cm)) in masses.iter().enumerate() {
        h += hs.y[i].norm2() / (2.0 * rm) - rm * cm * inv_dist(hs.x[i], Vec3::ZERO)?;
    }
    Ok(h)
}

fn helio_masses(mp: &MassParams) -> Vec<(f64, f64)> {
    (0..mp.n()).map(|i| mp.kepler_masses(i)).collect()
}

/// The perturbing function f_hel.
pub fn perturbation_hel(hs: &HelioState, mp: &MassParams) -> Result<f64> {
    let n = mp.n();
    let mut f = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            f += hs.y[i].dot(hs.y[j]) / mp.m0 - mp.m[i] * mp.m[j] * inv_dist(hs.x[i], hs.x[j])?;
        }
    }
    Ok(f)
}

/// (Keplerian part, f_hel) of the heliocentric Hamiltonian.
pub fn hamiltonian_hel_parts(hs: &HelioState, mp: &MassParams) -> Result<(f64, f64)> {
    Ok((
        kepler_part(hs, &helio_masses(mp))?,
        perturbation_hel(hs, mp)?,
    ))
}

pub fn hamiltonian_hel(hs: &HelioState, mp: &MassParams) -> Result<f64> {
    let (k, f) = hamiltonian_hel_parts(hs, mp)?;
    Ok(k + mp.mu * f)
}

fn require_two(n: usize) -> Result<()> {
    if n != 2 {
        return Err(Error::UnsupportedBodyCount(n));
    }
    Ok(())
}

/// Jacobi variables (ỹ, x̃) of a three-body state.
pub fn to_jacobi(s: &FullState, mp: &MassParams) -> Result<HelioState> {
    require_two(mp.n())?;
    let eps = mp.jacobi_eps();
    let q_inner = s.q[0] * (1.0 - eps) + s.q[1] * eps;
    Ok(HelioState {
        y: vec![s.p[1] + s.p[2] * eps, s.p[2]],
        x: vec![s.q[1] - s.q[0], s.q[2] - q_inner],
    })
}

/// Lift of Jacobi variables to the slice q⁽⁰⁾ = 0, ỹ⁽⁰⁾ = 0.
pub fn from_jacobi(js: &HelioState, mp: &MassParams) -> Result<FullState> {
    require_two(mp.n())?;
    let eps = mp.jacobi_eps();
    let (y1, y2) = (js.y[0], js.y[1]);
    Ok(FullState {
        p: vec![-y1 - y2 * (1.0 - eps), y1 - y2 * eps, y2],
        q: vec![Vec3::ZERO, js.x[0], js.x[0] * eps + js.x[1]],
    })
}

/// Jacobi change on the whole phase space, (p, q) ↦ (ỹ⁽⁰⁾, ỹ, x̃⁽⁰⁾, x̃).
pub fn jacobi_linear(s: &FullState, mp: &MassParams) -> Result<FullState> {
    let js = to_jacobi(s, mp)?;
    let total = s.p.iter().fold(Vec3::ZERO, |a, &v| a + v);
    Ok(FullState {
        p: vec![total, js.y[0], js.y[1]],
        q: vec![s.q[0], js.x[0], js.x[1]],
    })
}

pub fn jacobi_linear_inverse(c: &FullState, mp: &MassParams) -> Result<FullState> {
    require_two(mp.n())?;
    let eps = mp.jacobi_eps();
    let (y0, y1, y2) = (c.p[0], c.p[1], c.p[2]);
    let (x0, x1, x2) = (c.q[0], c.q[1], c.q[2]);
    Ok(FullState {
        p: vec![y0 - y1 - y2 * (1.0 - eps), y1 - y2 * eps, y2],
        q: vec![x0, x1 + x0, x2 + x0 + x1 * eps],
    })
}

/// (Keplerian part with Jacobi masses, f_Jac).
///
/// f_Jac is evaluated without cancellation so that it stays accurate as μ → 0,
/// where it tends to m₁m₂(x̃⁽¹⁾·x̃⁽²⁾/|x̃⁽²⁾|³ − 1/|x̃⁽¹⁾−x̃⁽²⁾|).
pub fn hamiltonian_jac_parts(js: &HelioState, mp: &MassParams) -> Result<(f64, f64)> {
    require_two(mp.n())?;
    let masses = [mp.jacobi_masses(0), mp.jacobi_masses(1)];
    let kep = kepler_part(js, &masses)?;
    let (m0, mu, m1, m2) = (mp.m0, mp.mu, mp.m[0], mp.m[1]);
    let (x1, x2) = (js.x[0], js.x[1]);
    let inner = m0 + mu * m1;
    let eps = mu * m1 / inner;
    // −m₀m₂(1/|x₂+εx₁| − 1/|x₂|)/μ written as a ratio of small quantities
    let a = x2 + x1 * eps;
    let (ra, rb) = (a.norm(), x2.norm());
    if ra < EPS_COLL || rb < EPS_COLL {
        return Err(Error::Collision);
    }
    let num = (m1 / inner) * (2.0 * x1.dot(x2) + eps * x1.norm2());
    let indirect = m0 * m2 * num / ((ra + rb) * ra * rb);
    let direct = m1 * m2 * inv_dist(x1 * (m0 / inner), x2)?;
    Ok((kep, indirect - direct))
}

pub fn hamiltonian_jac(js: &HelioState, mp: &MassParams) -> Result<f64> {
    let (k, f) = hamiltonian_jac_parts(js, mp)?;
    Ok(k + mp.mu * f)
}

/// The four-term display of the Jacobi Hamiltonian, evaluated literally.
pub fn hamiltonian_jac_direct(js: &HelioState, mp: &MassParams) -> Result<f64> {
    require_two(mp.n())?;
    let (m0, mu, m1, m2) = (mp.m0, mp.mu, mp.m[0], mp.m[1]);
    let (rm1, _) = mp.jacobi_masses(0);
    let (rm2, _) = mp.jacobi_masses(1);
    let inner = m0 + mu * m1;
    let (x1, x2) = (js.x[0], js.x[1]);
    Ok(
        js.y[0].norm2() / (2.0 * rm1) + js.y[1].norm2() / (2.0 * rm2)
            - m0 * m1 * inv_dist(x1, Vec3::ZERO)?
            - m0 * m2 * inv_dist(x2 + x1 * (mu * m1 / inner), Vec3::ZERO)?
            - mu * m1 * m2 * inv_dist(x1 * (m0 / inner), x2)?,
    )
}

/// Truncated Jacobi Hamiltonian with the dipole term.
pub fn hamiltonian_jac_trunc(js: &HelioState, mp: &MassParams) -> Result<f64> {
    require_two(mp.n())?;
    let masses = [mp.jacobi_masses(0), mp.jacobi_masses(1)];
    let (x1, x2) = (js.x[0], js.x[1]);
    let r2 = x2.norm();
    if r2 < EPS_COLL {
        return Err(Error::Collision);
    }
    let f = mp.m[0] * mp.m[1] * (x1.dot(x2) / r2.powi(3) - inv_dist(x1, x2)?);
    Ok(kepler_part(js, &masses)? + mp.mu * f)
}

/// The linear change φ_hel/Jac from Jacobi to heliocentric variables.
pub fn phi_hel_jac(js: &HelioState, mp: &MassParams) -> Result<HelioState> {
    require_two(mp.n())?;
    let eps = mp.jacobi_eps();
    Ok(HelioState {
        y: vec![js.y[0] - js.y[1] * eps, js.y[1]],
        x: vec![js.x[0], js.x[0] * eps + js.x[1]],
    })
}

pub fn phi_hel_jac_inverse(hs: &HelioState, mp: &MassParams) -> Result<HelioState> {
    require_two(mp.n())?;
    let eps = mp.jacobi_eps();
    Ok(HelioState {
        y: vec![hs.y[0] + hs.y[1] * eps, hs.y[1]],
        x: vec![hs.x[0], hs.x[1] - hs.x[0] * eps],
    })
}

pub fn integrals_full(s: &FullState, mp: &MassParams) -> Result<Integrals> {
    let p = s.p.iter().fold(Vec3::ZERO, |a, &v| a + v);
    let c =
        s.q.iter()
            .zip(&s.p)
            .fold(Vec3::ZERO, |a, (q, p)| a + q.cross(*p));
    Ok(Integrals {
        p,
        c,
        g: c.norm(),
        c3: c[2],
        e: hamiltonian_full(s, mp)?,
    })
}

/// Integrals of a heliocentric state; P is that of the lifted state and vanishes.
pub fn integrals_hel(hs: &HelioState, mp: &MassParams) -> Result<Integrals> {
    let c = hs
        .angular_momenta()
        .into_iter()
        .fold(Vec3::ZERO, |a, v| a + v);
    Ok(Integrals {
        p: Vec3::ZERO,
        c,
        g: c.norm(),
        c3: c[2],
        e: hamiltonian_hel(hs, mp)?,
    })
}

pub fn total_angular_momentum(hs: &HelioState) -> Vec3 {
    hs.angular_momenta()
        .into_iter()
        .fold(Vec3::ZERO, |a, v| a + v)
}

/// Numerical Poisson bracket {f, g} = Σ ∂f/∂x·∂g/∂y − ∂f/∂y·∂g/∂x by central differences.
pub fn poisson_bracket<F, G>(f: F, g: G, hs: &HelioState) -> f64
where
    F: Fn(&HelioState) -> f64,
    G: Fn(&HelioState) -> f64,
{
    let z = hs.to_flat();
    let d = z.len() / 2;
    let grad = |h: &dyn Fn(&HelioState) -> f64| -> Vec<f64> {
        (0..z.len())
            .map(|k| {
                let step = 1e-5 * z[k].abs().max(1.0);
                let mut zp = z.clone();
                let mut zm = z.clone();
                zp[k] += step;
                zm[k] -= step;
                (h(&HelioState::from_flat(&zp)) - h(&HelioState::from_flat(&zm))) / (2.0 * step)
            })
            .collect()
    };
    let gf = grad(&f);
    let gg = grad(&g);
    (0..d).map(|k| gf[d + k] * gg[k] - gf[k] * gg[d + k]).sum()
}
