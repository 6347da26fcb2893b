//! Secular structure of the RPS chart at the origin z = 0 of the secular variables.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::phase_space::MassParams;

use super::averaging::{average_perturbation, QuadratureSpec};
use super::charts::{build_chart, ChartKind};

/// Positions of (η, p, ξ, q) in an RPS coordinate vector.
pub fn secular_indices(n: usize) -> Vec<usize> {
    (n..3 * n).chain(4 * n..6 * n).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecularOrigin {
    /// ∂f_av/∂z at z = 0, in the order of [`secular_indices`].
    pub gradient: Vec<f64>,
    pub max_gradient: f64,
    /// Eigenvalues (re, im) of Ω·Hess f_av.
    pub eigenvalues: Vec<(f64, f64)>,
    pub max_real_part: f64,
    pub max_abs_eigenvalue: f64,
}

/// Gradient and linearization of the λ-averaged f_hel at z = 0 for given Λ.
pub fn rps_secular_origin(
    mp: &MassParams,
    lambda: &[f64],
    step: f64,
    quad: &QuadratureSpec,
) -> Result<SecularOrigin> {
    let n = mp.n();
    let chart = build_chart(ChartKind::Rps, mp, None)?;
    let mut base = vec![0.0; 6 * n];
    base[..n].copy_from_slice(lambda);
    let idx = secular_indices(n);
    let d = idx.len();
    let f = |shifts: &[(usize, f64)]| -> Result<f64> {
        let mut p = base.clone();
        for &(k, s) in shifts {
            p[idx[k]] += s;
        }
        average_perturbation(&chart, mp, &p, quad)
    };
    let f0 = f(&[])?;
    let mut gradient = vec![0.0; d];
    let mut hess = DMatrix::<f64>::zeros(d, d);
    for a in 0..d {
        let fp = f(&[(a, step)])?;
        let fm = f(&[(a, -step)])?;
        gradient[a] = (fp - fm) / (2.0 * step);
        hess[(a, a)] = (fp - 2.0 * f0 + fm) / (step * step);
        for b in a + 1..d {
            let v = (f(&[(a, step), (b, step)])?
                - f(&[(a, step), (b, -step)])?
                - f(&[(a, -step), (b, step)])?
                + f(&[(a, -step), (b, -step)])?)
                / (4.0 * step * step);
            hess[(a, b)] = v;
            hess[(b, a)] = v;
        }
    }
    // z = (η, p | ξ, q): the first half are the actions
    let half = d / 2;
    let mut omega = DMatrix::<f64>::zeros(d, d);
    for i in 0..half {
        omega[(i, half + i)] = 1.0;
        omega[(half + i, i)] = -1.0;
    }
    let eig = (omega * hess).complex_eigenvalues();
    let eigenvalues: Vec<(f64, f64)> = eig.iter().map(|c| (c.re, c.im)).collect();
    Ok(SecularOrigin {
        max_gradient: gradient.iter().map(|g| g.abs()).fold(0.0, f64::max),
        gradient,
        max_real_part: eigenvalues.iter().map(|e| e.0.abs()).fold(0.0, f64::max),
        max_abs_eigenvalue: eigenvalues
            .iter()
            .map(|e| e.0.hypot(e.1))
            .fold(0.0, f64::max),
        eigenvalues,
    })
}
