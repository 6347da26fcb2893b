//! Chart registry: every chart is presented as a pair of flat maps between its
//! coordinates (actions first, then angles) and a canonical target space.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{Vec3, EPS_NODE};
use crate::kepler::{
    cartesian_to_poincare, delaunay_forward, delaunay_inverse, poincare_to_cartesian,
    DelaunayCoords, PoincareCoords,
};
use crate::node_reductions::{
    deprit_forward, deprit_inverse, deprit_planetary, deprit_planetary_forward, radau_forward,
    radau_inverse, radau_regularize, radau_regularized_forward, radau_regularized_inverse,
    DepritCoords, DepritPlanetaryCoords, JacobiRadauCoords, RadauRegularized,
};
use crate::phase_space::{
    from_heliocentric, heliocentric_linear, heliocentric_linear_inverse, jacobi_linear,
    jacobi_linear_inverse, phi_hel_jac, phi_hel_jac_inverse, total_angular_momentum, FullState,
    HelioState, MassParams,
};
use crate::regular_charts::{
    fullred_forward, fullred_inverse, perihelia_forward, perihelia_inverse, rps_from_cartesian,
    rps_from_deprit, rps_to_cartesian, rps_to_deprit, FullRedCoords, PeriheliaCoords,
    RpsConvention, RpsCoords,
};

pub type MapFn = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;
pub type DomainFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// What the flat target vector of a chart represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// Heliocentric (y, x) of n planets.
    Helio,
    /// Sun and planets (p, q).
    Full,
    /// Coordinates of another chart.
    Coords,
}

#[derive(Clone)]
pub struct ChartSpec {
    pub name: String,
    pub dim: usize,
    pub target_dim: usize,
    pub target: Target,
    pub labels: Vec<String>,
    pub angle_mask: Vec<bool>,
    /// Angle components of the target vector (differenced on the circle).
    pub target_angle_mask: Vec<bool>,
    /// Externally fixed quantities such as G.
    pub parameter_slots: Vec<(String, f64)>,
    /// Target → coordinates.
    pub forward: MapFn,
    /// Coordinates → target.
    pub inverse: MapFn,
    pub domain: DomainFn,
}

impl fmt::Debug for ChartSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("target_dim", &self.target_dim)
            .field("parameter_slots", &self.parameter_slots)
            .finish()
    }
}

impl ChartSpec {
    pub fn in_domain(&self, point: &[f64]) -> bool {
        point.len() == self.dim && point.iter().all(|v| v.is_finite()) && (self.domain)(point)
    }

    /// Largest per-coordinate difference of forward∘inverse from the identity,
    /// with angles compared on the circle.
    pub fn round_trip(&self, point: &[f64]) -> Result<f64> {
        let back = (self.forward)(&(self.inverse)(point)?)?;
        Ok(point
            .iter()
            .zip(&back)
            .zip(&self.angle_mask)
            .map(|((a, b), &is_angle)| {
                if is_angle {
                    crate::geom::angle_diff(*a, *b).abs()
                } else {
                    (a - b).abs()
                }
            })
            .fold(0.0, f64::max))
    }

    /// The target as a heliocentric state, when it is one.
    pub fn helio_target(&self, point: &[f64]) -> Result<HelioState> {
        let t = (self.inverse)(point)?;
        match self.target {
            Target::Helio => Ok(HelioState::from_flat(&t)),
            Target::Full => Ok(crate::phase_space::to_heliocentric(&FullState::from_flat(
                &t,
            ))),
            Target::Coords => Err(Error::DomainViolation(format!(
                "chart {} does not map to Cartesian variables",
                self.name
            ))),
        }
    }
}

macro_rules! chart_kinds {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum ChartKind { $($variant),* }

        impl ChartKind {
            pub const ALL: &'static [ChartKind] = &[$(ChartKind::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(ChartKind::$variant => $name),* }
            }
        }

        impl FromStr for ChartKind {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(ChartKind::$variant),)*
                    other => Err(Error::UnknownChart(other.to_string())),
                }
            }
        }
    };
}

chart_kinds! {
    Identity => "identity",
    Heliocentric => "heliocentric",
    JacobiLinear => "jacobi",
    HelJac => "hel_jac",
    Delaunay => "delaunay",
    Poincare => "poincare",
    JacobiRadau => "jacobi_radau",
    RadauRegularized => "radau_regularized",
    Deprit => "deprit",
    DepritPlanetary => "deprit_planetary",
    Rps => "rps",
    RpsFromDepritA => "rps_convention_a",
    RpsFromDepritB => "rps_convention_b",
    FullReduction => "full_reduction",
    Perihelia => "perihelia",
    WrongSign => "wrong_sign",
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl ChartKind {
    /// Charts defined only for two planets.
    pub fn two_planets_only(self) -> bool {
        matches!(
            self,
            ChartKind::JacobiLinear
                | ChartKind::HelJac
                | ChartKind::JacobiRadau
                | ChartKind::RadauRegularized
        )
    }

    /// Charts whose inverse map is an imbedding at fixed G.
    pub fn fixed_g(self) -> bool {
        matches!(
            self,
            ChartKind::JacobiRadau | ChartKind::RadauRegularized | ChartKind::FullReduction
        )
    }
}

fn indexed(names: &[&str], n: usize) -> Vec<String> {
    names
        .iter()
        .flat_map(|s| (1..=n).map(move |i| format!("{s}{i}")))
        .collect()
}

fn mask(actions: usize, angles: usize) -> Vec<bool> {
    let mut m = vec![false; actions];
    m.extend(vec![true; angles]);
    m
}

fn helio_dim(n: usize) -> usize {
    6 * n
}

fn always(_: &[f64]) -> bool {
    true
}

/// Sun displacement used to lift heliocentric samples to the full phase space.
const SUN_Q: Vec3 = Vec3::new(0.013, -0.021, 0.004);
const SUN_P: Vec3 = Vec3::new(0.3, 0.1, -0.2);

/// Full-space point with a nonzero total momentum built from a heliocentric state.
pub fn lift_state(hs: &HelioState) -> FullState {
    let mut fs = from_heliocentric(hs);
    for q in fs.q.iter_mut() {
        *q += SUN_Q;
    }
    fs.p[0] += SUN_P;
    fs
}

fn delaunay_chart(mp: &MassParams, flip: bool) -> (MapFn, MapFn) {
    let n = mp.n();
    let mf = mp.clone();
    let mi = mp.clone();
    let sign = if flip { -1.0 } else { 1.0 };
    let forward: MapFn = Arc::new(move |t: &[f64]| {
        let hs = HelioState::from_flat(t);
        let mut v = vec![0.0; 6 * n];
        for i in 0..n {
            let (rm, cm) = mf.kepler_masses(i);
            let d = delaunay_forward(hs.y[i], hs.x[i], rm, cm)?;
            let vals = [d.Lambda, d.Gamma, d.H, d.ell, sign * d.g, d.h];
            for (k, val) in vals.into_iter().enumerate() {
                v[k * n + i] = if k == 4 {
                    crate::geom::wrap_angle(val)
                } else {
                    val
                };
            }
        }
        Ok(v)
    });
    let inverse: MapFn = Arc::new(move |c: &[f64]| {
        let mut hs = HelioState {
            y: vec![Vec3::ZERO; n],
            x: vec![Vec3::ZERO; n],
        };
        for i in 0..n {
            let (rm, cm) = mi.kepler_masses(i);
            let d = DelaunayCoords {
                Lambda: c[i],
                Gamma: c[n + i],
                H: c[2 * n + i],
                ell: c[3 * n + i],
                g: sign * c[4 * n + i],
                h: c[5 * n + i],
            };
            (hs.y[i], hs.x[i]) = delaunay_inverse(&d, rm, cm)?;
        }
        Ok(hs.to_flat())
    });
    (forward, inverse)
}

/// Spatial Poincaré chart for all bodies with the given (𝔪ᵢ, 𝔐ᵢ).
pub fn poincare_chart(masses: Vec<(f64, f64)>) -> ChartSpec {
    let n = masses.len();
    let mf = masses.clone();
    let forward: MapFn = Arc::new(move |t: &[f64]| {
        let hs = HelioState::from_flat(t);
        let mut v = vec![0.0; 6 * n];
        for (i, &(rm, cm)) in mf.iter().enumerate() {
            let pc = cartesian_to_poincare(hs.y[i], hs.x[i], rm, cm)?;
            for (k, val) in [pc.Lambda, pc.eta, pc.p, pc.lam, pc.xi, pc.q]
                .into_iter()
                .enumerate()
            {
                v[k * n + i] = val;
            }
        }
        Ok(v)
    });
    let inverse: MapFn = Arc::new(move |c: &[f64]| {
        let mut hs = HelioState {
            y: vec![Vec3::ZERO; n],
            x: vec![Vec3::ZERO; n],
        };
        for (i, &(rm, cm)) in masses.iter().enumerate() {
            let pc = PoincareCoords {
                Lambda: c[i],
                eta: c[n + i],
                p: c[2 * n + i],
                lam: c[3 * n + i],
                xi: c[4 * n + i],
                q: c[5 * n + i],
            };
            (hs.y[i], hs.x[i]) = poincare_to_cartesian(&pc, rm, cm)?;
        }
        Ok(hs.to_flat())
    });
    let inv = inverse.clone();
    ChartSpec {
        name: ChartKind::Poincare.name().into(),
        dim: 6 * n,
        target_dim: 6 * n,
        target: Target::Helio,
        labels: indexed(&["Lambda", "eta", "p", "lambda", "xi", "q"], n),
        angle_mask: [vec![false; 3 * n], vec![true; n], vec![false; 2 * n]].concat(),
        target_angle_mask: vec![false; 6 * n],
        parameter_slots: vec![],
        forward,
        inverse,
        domain: Arc::new(move |c| inv(c).is_ok()),
    }
}

fn from_inverse_domain(inverse: &MapFn) -> DomainFn {
    let inv = inverse.clone();
    Arc::new(move |c| inv(c).is_ok())
}

/// Builds the chart with parameters fixed by the given heliocentric state
/// (G for the fixed-G imbeddings) and returns it with the state's coordinates.
pub fn chart_at_state(
    kind: ChartKind,
    mp: &MassParams,
    hs: &HelioState,
) -> Result<(ChartSpec, Vec<f64>)> {
    let n = mp.n();
    if hs.n() != n {
        return Err(Error::UnsupportedBodyCount(hs.n()));
    }
    if kind.two_planets_only() && n != 2 {
        return Err(Error::UnsupportedBodyCount(n));
    }
    let g = total_angular_momentum(hs).norm();
    let chart = build_chart(kind, mp, Some(g))?;
    let target = match chart.target {
        Target::Full => lift_state(hs).to_flat(),
        Target::Helio => hs.to_flat(),
        Target::Coords => return Ok((chart, deprit_planetary_forward(hs, mp)?.to_vec())),
    };
    let point = (chart.forward)(&target)?;
    Ok((chart, point))
}

/// Builds a chart; `g` is required by the fixed-G charts.
pub fn build_chart(kind: ChartKind, mp: &MassParams, g: Option<f64>) -> Result<ChartSpec> {
    let n = mp.n();
    if kind.two_planets_only() && n != 2 {
        return Err(Error::UnsupportedBodyCount(n));
    }
    let need_g =
        || g.ok_or_else(|| Error::DomainViolation(format!("chart {kind} needs the parameter G")));
    let m = mp.clone();
    let m2 = mp.clone();
    let d6 = helio_dim(n);
    let mut spec = match kind {
        ChartKind::Identity => {
            let id: MapFn = Arc::new(|v: &[f64]| Ok(v.to_vec()));
            ChartSpec {
                name: kind.name().into(),
                dim: d6,
                target_dim: d6,
                target: Target::Helio,
                labels: [
                    indexed(&["y1_", "y2_", "y3_"], n),
                    indexed(&["x1_", "x2_", "x3_"], n),
                ]
                .concat(),
                angle_mask: vec![false; d6],
                target_angle_mask: vec![false; d6],
                parameter_slots: vec![],
                forward: id.clone(),
                inverse: id,
                domain: Arc::new(always),
            }
        }
        ChartKind::Heliocentric | ChartKind::JacobiLinear => {
            let d = 6 * (n + 1);
            let jac = kind == ChartKind::JacobiLinear;
            let forward: MapFn = Arc::new(move |t: &[f64]| {
                let fs = FullState::from_flat(t);
                Ok(if jac {
                    jacobi_linear(&fs, &m)?
                } else {
                    heliocentric_linear(&fs)
                }
                .to_flat())
            });
            let inverse: MapFn = Arc::new(move |c: &[f64]| {
                let cs = FullState::from_flat(c);
                Ok(if jac {
                    jacobi_linear_inverse(&cs, &m2)?
                } else {
                    heliocentric_linear_inverse(&cs)
                }
                .to_flat())
            });
            ChartSpec {
                name: kind.name().into(),
                dim: d,
                target_dim: d,
                target: Target::Full,
                labels: [
                    indexed(&["Y0_", "Y1_", "Y2_"], n + 1),
                    indexed(&["X0_", "X1_", "X2_"], n + 1),
                ]
                .concat(),
                angle_mask: vec![false; d],
                target_angle_mask: vec![false; d],
                parameter_slots: vec![],
                forward,
                inverse,
                domain: Arc::new(always),
            }
        }
        ChartKind::HelJac => {
            let forward: MapFn = Arc::new(move |t: &[f64]| {
                Ok(phi_hel_jac_inverse(&HelioState::from_flat(t), &m)?.to_flat())
            });
            let inverse: MapFn = Arc::new(move |c: &[f64]| {
                Ok(phi_hel_jac(&HelioState::from_flat(c), &m2)?.to_flat())
            });
            ChartSpec {
                name: kind.name().into(),
                dim: d6,
                target_dim: d6,
                target: Target::Helio,
                labels: [
                    indexed(&["ty1_", "ty2_", "ty3_"], n),
                    indexed(&["tx1_", "tx2_", "tx3_"], n),
                ]
                .concat(),
                angle_mask: vec![false; d6],
                target_angle_mask: vec![false; d6],
                parameter_slots: vec![],
                forward,
                inverse,
                domain: Arc::new(always),
            }
        }
        ChartKind::Delaunay | ChartKind::WrongSign => {
            let (forward, inverse) = delaunay_chart(mp, kind == ChartKind::WrongSign);
            ChartSpec {
                name: kind.name().into(),
                dim: d6,
                target_dim: d6,
                target: Target::Helio,
                labels: indexed(&["Lambda", "Gamma", "H", "ell", "g", "h"], n),
                angle_mask: mask(3 * n, 3 * n),
                target_angle_mask: vec![false; d6],
                parameter_slots: vec![],
                domain: from_inverse_domain(&inverse),
                forward,
                inverse,
            }
        }
        ChartKind::Poincare => poincare_chart((0..n).map(|i| mp.kepler_masses(i)).collect()),
        ChartKind::JacobiRadau => {
            let g = need_g()?;
            let forward: MapFn = Arc::new(move |t: &[f64]| {
                Ok(radau_forward(&HelioState::from_flat(t), &m)?.to_vec())
            });
            let inverse: MapFn = Arc::new(move |c: &[f64]| {
                Ok(radau_inverse(&JacobiRadauCoords::from_vec(c, g), &m2)?.to_flat())
            });
            ChartSpec {
                name: kind.name().into(),
                dim: 8,
                target_dim: 12,
                target: Target::Helio,
                labels: indexed(&["Lambda", "Gamma", "ell", "g"], 2),
                angle_mask: mask(4, 4),
                target_angle_mask: vec![false; 12],
                parameter_slots: vec![("G".into(), g)],
                domain: from_inverse_domain(&inverse),
                forward,
                inverse,
            }
        }
        ChartKind::RadauRegularized => {
            let g = need_g()?;
            let forward: MapFn = Arc::new(move |t: &[f64]| {
                Ok(radau_regularized_forward(&HelioState::from_flat(t), &m)?.to_vec())
            });
            let inverse: MapFn = Arc::new(move |c: &[f64]| {
                Ok(radau_regularized_inverse(&RadauRegularized::from_vec(c, g), &m2)?.to_flat())
            });
            ChartSpec {
                name: kind.name().into(),
                dim: 8,
                target_dim: 12,
                target: Target::Helio,
                labels: indexed(&["Lambda", "h_hat", "lambda_hat", "x_hat"], 2),
                angle_mask: [vec![false; 4], vec![true; 2], vec![false; 2]].concat(),
                target_angle_mask: vec![false; 12],
                parameter_slots: vec![("G".into(), g)],
                domain: from_inverse_domain(&inverse),
                forward,
                inverse,
            }
        }
        ChartKind::Deprit => {
            let forward: MapFn =
                Arc::new(move |t: &[f64]| Ok(deprit_forward(&HelioState::from_flat(t))?.to_vec()));
            let inverse: MapFn = Arc::new(move |c: &[f64]| {
                Ok(deprit_inverse(&DepritCoords::from_vec(c, n))?.to_flat())
            });
            ChartSpec {
                name: kind.name().into(),
                dim: d6,
                target_dim: d6,
                target: Target::Helio,
                labels: deprit_labels(n, "R", "Phi", "r", "phi"),
                angle_mask: mask(3 * n, 3 * n),
                target_angle_mask: vec![false; d6],
                parameter_slots: vec![],
                domain: from_inverse_domain(&inverse),
                forward,
                inverse,
            }
        }
        ChartKind::DepritPlanetary => {
            let forward: MapFn = Arc::new(move |t: &[f64]| {
                Ok(deprit_planetary_forward(&HelioState::from_flat(t), &m)?.to_vec())
            });
            let inverse: MapFn = Arc::new(move |c: &[f64]| {
                Ok(deprit_planetary(&DepritPlanetaryCoords::from_vec(c, n), &m2)?.to_flat())
            });
            ChartSpec {
                name: kind.name().into(),
                dim: d6,
                target_dim: d6,
                target: Target::Helio,
                labels: deprit_labels(n, "Lambda", "Gamma", "ell", "gamma"),
                angle_mask: mask(3 * n, 3 * n),
                target_angle_mask: vec![false; d6],
                parameter_slots: vec![],
                domain: from_inverse_domain(&inverse),
                forward,
                inverse,
            }
        }
        ChartKind::Rps => {
            let forward: MapFn = Arc::new(move |t: &[f64]| {
                Ok(rps_from_cartesian(&HelioState::from_flat(t), &m)?.to_vec())
            });
            let inverse: MapFn = Arc::new(move |c: &[f64]| {
                Ok(rps_to_cartesian(&RpsCoords::from_vec(c, n), &m2)?.to_flat())
            });
            ChartSpec {
                name: kind.name().into(),
                dim: d6,
                target_dim: d6,
                target: Target::Helio,
                labels: rps_labels(n),
                angle_mask: [vec![false; 3 * n], vec![true; n], vec![false; 2 * n]].concat(),
                target_angle_mask: vec![false; d6],
                parameter_slots: vec![],
                domain: from_inverse_domain(&inverse),
                forward,
                inverse,
            }
        }
        ChartKind::RpsFromDepritA | ChartKind::RpsFromDepritB => {
            // coordinates are Deprit planetary variables, the target RPS variables
            let conv = if kind == ChartKind::RpsFromDepritA {
                RpsConvention::A
            } else {
                RpsConvention::B
            };
            let forward: MapFn = Arc::new(move |t: &[f64]| {
                if conv == RpsConvention::B {
                    return Err(Error::DomainViolation("convention B has no inverse".into()));
                }
                Ok(rps_to_deprit(&RpsCoords::from_vec(t, n))?.to_vec())
            });
            let inverse: MapFn = Arc::new(move |c: &[f64]| {
                Ok(rps_from_deprit(&DepritPlanetaryCoords::from_vec(c, n), conv)?.to_vec())
            });
            ChartSpec {
                name: kind.name().into(),
                dim: d6,
                target_dim: d6,
                target: Target::Coords,
                labels: deprit_labels(n, "Lambda", "Gamma", "ell", "gamma"),
                angle_mask: mask(3 * n, 3 * n),
                target_angle_mask: [vec![false; 3 * n], vec![true; n], vec![false; 2 * n]].concat(),
                parameter_slots: vec![],
                domain: from_inverse_domain(&inverse),
                forward,
                inverse,
            }
        }
        ChartKind::FullReduction => {
            let g = need_g()?;
            let forward: MapFn = Arc::new(move |t: &[f64]| {
                Ok(fullred_forward(&HelioState::from_flat(t), &m)?.to_vec())
            });
            let inverse: MapFn = Arc::new(move |c: &[f64]| {
                Ok(fullred_inverse(&FullRedCoords::from_vec(c, n, g), &m2)?.to_flat())
            });
            let k = n.saturating_sub(2);
            let mut labels = indexed(&["Lambda", "eta"], n);
            labels.extend((2..n).map(|j| format!("p{j}")));
            labels.extend(indexed(&["lambda_hat", "xi"], n));
            labels.extend((2..n).map(|j| format!("q{j}")));
            ChartSpec {
                name: kind.name().into(),
                dim: 4 * n + 2 * k,
                target_dim: d6,
                target: Target::Helio,
                labels,
                angle_mask: [vec![false; 2 * n + k], vec![true; n], vec![false; n + k]].concat(),
                target_angle_mask: vec![false; d6],
                parameter_slots: vec![("G".into(), g)],
                domain: from_inverse_domain(&inverse),
                forward,
                inverse,
            }
        }
        ChartKind::Perihelia => {
            let forward: MapFn = Arc::new(move |t: &[f64]| {
                Ok(perihelia_forward(&HelioState::from_flat(t), &m)?.to_vec())
            });
            let inverse: MapFn = Arc::new(move |c: &[f64]| {
                Ok(perihelia_inverse(&PeriheliaCoords::from_vec(c, n), &m2)?.to_flat())
            });
            ChartSpec {
                name: kind.name().into(),
                dim: d6,
                target_dim: d6,
                target: Target::Helio,
                labels: [
                    indexed(&["Lambda"], n),
                    (0..n).map(|j| format!("chi{j}")).collect(),
                    (0..n).map(|j| format!("Theta{j}")).collect(),
                    indexed(&["ell"], n),
                    (0..n).map(|j| format!("kappa{j}")).collect(),
                    (0..n).map(|j| format!("vartheta{j}")).collect(),
                ]
                .concat(),
                angle_mask: mask(3 * n, 3 * n),
                target_angle_mask: vec![false; d6],
                parameter_slots: vec![],
                domain: from_inverse_domain(&inverse),
                forward,
                inverse,
            }
        }
    };
    spec.name = kind.name().into();
    Ok(spec)
}

fn deprit_labels(n: usize, a: &str, b: &str, c: &str, d: &str) -> Vec<String> {
    let mut l = indexed(&[a, b], n);
    l.push("C3".into());
    l.extend((0..n - 1).map(|j| format!("Psi{j}")));
    l.extend(indexed(&[c, d], n));
    l.push("zeta".into());
    l.extend((0..n - 1).map(|j| format!("psi{j}")));
    l
}

fn rps_labels(n: usize) -> Vec<String> {
    let mut l = indexed(&["Lambda", "eta"], n);
    l.extend((0..n).map(|j| format!("p{j}")));
    l.extend(indexed(&["lambda", "xi"], n));
    l.extend((0..n).map(|j| format!("q{j}")));
    l
}

/// Normalized node lengths |a × b|/(|a||b|) of every node family used by the charts.
pub fn node_norms(hs: &HelioState, mp: &MassParams) -> Vec<(String, f64)> {
    let n = hs.n();
    let sin = |a: Vec3, b: Vec3| {
        let d = a.norm() * b.norm();
        if d < EPS_NODE {
            0.0
        } else {
            a.cross(b).norm() / d
        }
    };
    let cs = hs.angular_momenta();
    let mut s = vec![Vec3::ZERO; n];
    s[n - 1] = cs[n - 1];
    for j in (0..n - 1).rev() {
        s[j] = s[j + 1] + cs[j];
    }
    let mut out = vec![("nu0".to_string(), sin(Vec3::K3, s[0]))];
    for (i, c) in cs.iter().enumerate() {
        out.push((format!("k3xC{}", i + 1), sin(Vec3::K3, *c)));
    }
    for j in 1..n {
        out.push((format!("nu{j}"), sin(s[j - 1], cs[j - 1])));
    }
    for i in 0..n {
        let (rm, cm) = mp.kepler_masses(i);
        if let Ok(el) = crate::kepler::elements_from_state(hs.y[i], hs.x[i], rm, cm) {
            if i + 1 < n {
                out.push((format!("n_tilde{}", i + 1), sin(s[i], el.p_dir)));
                out.push((format!("nu_tilde{}", i + 2), sin(el.p_dir, s[i + 1])));
            }
        }
    }
    out
}

/// Regularized Radau coordinates of a Jacobi–Radau point.
pub fn radau_to_regularized(c: &[f64], g: f64) -> Vec<f64> {
    radau_regularize(&JacobiRadauCoords::from_vec(c, g)).to_vec()
}
