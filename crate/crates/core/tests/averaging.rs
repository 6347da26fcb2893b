use std::f64::consts::TAU;

use planetary_charts::geom::{rot1, rot3, Mat3};
use planetary_charts::kepler::{
    delaunay_forward, delaunay_inverse, lambda_from_a, poincare_forward, DelaunayCoords,
    PoincareCoords,
};
use planetary_charts::phase_space::MassParams;
use planetary_charts::verify::averaging::{
    average_perturbation, check_hel_jac_equivalence, torus_average, torus_average_scalar,
    QuadratureSpec,
};
use planetary_charts::verify::charts::poincare_chart;
use planetary_charts::verify::secular::rps_secular_origin;
use planetary_charts::Error;

fn masses(mu: f64) -> MassParams {
    MassParams::new(1.0, mu, vec![1.0, 0.7]).unwrap()
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..40 {
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a
}

fn helio_poincare(mp: &MassParams) -> planetary_charts::verify::ChartSpec {
    poincare_chart(vec![mp.kepler_masses(0), mp.kepler_masses(1)])
}

/// Poincaré secular point of two orbits given by Delaunay data (Λ, Γ, H, g, h).
fn secular_point(d: [[f64; 5]; 2]) -> Vec<f64> {
    let pc: Vec<PoincareCoords> = d
        .iter()
        .map(|b| {
            poincare_forward(&DelaunayCoords {
                Lambda: b[0],
                Gamma: b[1],
                H: b[2],
                ell: 0.0,
                g: b[3],
                h: b[4],
            })
        })
        .collect();
    let mut v = vec![0.0; 12];
    for i in 0..2 {
        v[i] = pc[i].Lambda;
        v[2 + i] = pc[i].eta;
        v[4 + i] = pc[i].p;
        v[6 + i] = pc[i].lam;
        v[8 + i] = pc[i].xi;
        v[10 + i] = pc[i].q;
    }
    v
}

fn sample_delaunay(mp: &MassParams) -> [[f64; 5]; 2] {
    let l1 = lambda_from_a(1.0, mp.kepler_masses(0).0, mp.kepler_masses(0).1);
    let l2 = lambda_from_a(1.9, mp.kepler_masses(1).0, mp.kepler_masses(1).1);
    [
        [l1, 0.98 * l1, 0.9 * l1, 0.4, 1.1],
        [l2, 0.95 * l2, 0.8 * l2, 2.2, 4.0],
    ]
}

#[test]
fn circular_coplanar_average_matches_agm() {
    let mp = masses(0.0);
    let (a1, a2) = (1.0, 1.7);
    let mut pt = vec![0.0; 12];
    pt[0] = lambda_from_a(a1, mp.kepler_masses(0).0, mp.kepler_masses(0).1);
    pt[1] = lambda_from_a(a2, mp.kepler_masses(1).0, mp.kepler_masses(1).1);
    let avg =
        average_perturbation(&helio_poincare(&mp), &mp, &pt, &QuadratureSpec::default()).unwrap();
    // the mean of 1/|x₁−x₂| over the relative angle is 1/AGM(a₁+a₂, a₂−a₁)
    let oracle = -mp.m[0] * mp.m[1] / agm(a1 + a2, a2 - a1);
    assert!(
        (avg - oracle).abs() <= 1e-9 * oracle.abs(),
        "{avg} vs {oracle}"
    );
}

#[test]
fn zero_average_identities() {
    let mp = masses(1e-3);
    for (i, e) in [(0usize, 0.1_f64), (1, 0.5)] {
        let (rm, cm) = mp.kepler_masses(i);
        let lam = lambda_from_a(1.3, rm, cm);
        let gam = lam * (1.0 - e * e).sqrt();
        let base = [0.0];
        let f = |p: &[f64]| {
            let d = DelaunayCoords {
                Lambda: lam,
                Gamma: gam,
                H: 0.7 * gam,
                ell: p[0],
                g: 0.9,
                h: 2.1,
            };
            let (y, x) = delaunay_inverse(&d, rm, cm)?;
            let r3 = x.norm().powi(3);
            Ok(vec![y[0], y[1], y[2], x[0] / r3, x[1] / r3, x[2] / r3])
        };
        let avg = torus_average(f, &base, &[0], &QuadratureSpec::default()).unwrap();
        for v in avg {
            assert!(v.abs() <= 1e-10, "e = {e}: {v:e}");
        }
    }
}

#[test]
fn averages_agree_at_zero_mu_and_split_linearly() {
    let mp = masses(1e-3);
    let pt = secular_point(sample_delaunay(&mp));
    let mus = [1e-3, 5e-4, 2.5e-4];
    let sweep = check_hel_jac_equivalence(&mp, &pt, &mus, &QuadratureSpec::default()).unwrap();
    assert!(sweep.d_at_zero <= 1e-12, "{}", sweep.d_at_zero);
    assert!((sweep.slope - 1.0).abs() <= 0.1, "{}", sweep.slope);
    assert!(sweep.report.passed);
    assert_eq!(sweep.rows.len(), 3);
    // halving μ roughly halves the gap
    assert!(sweep
        .rows
        .windows(2)
        .all(|w| (w[1].3 / w[0].3 - 0.5).abs() < 0.05));
}

#[test]
fn common_limit_is_the_averaged_newtonian_term() {
    let mp = masses(0.0);
    let d = sample_delaunay(&mp);
    let pt = secular_point(d);
    let avg =
        average_perturbation(&helio_poincare(&mp), &mp, &pt, &QuadratureSpec::default()).unwrap();
    // direct product trapezoid over the mean anomalies through the Delaunay map
    let m = 160;
    let mut sum = 0.0;
    for a in 0..m {
        for b in 0..m {
            let ells = [TAU * a as f64 / m as f64, TAU * b as f64 / m as f64];
            let x: Vec<_> = (0..2)
                .map(|i| {
                    let (rm, cm) = mp.kepler_masses(i);
                    let dc = DelaunayCoords {
                        Lambda: d[i][0],
                        Gamma: d[i][1],
                        H: d[i][2],
                        ell: ells[i],
                        g: d[i][3],
                        h: d[i][4],
                    };
                    delaunay_inverse(&dc, rm, cm).unwrap().1
                })
                .collect();
            sum += 1.0 / (x[0] - x[1]).norm();
        }
    }
    let newton = -mp.m[0] * mp.m[1] * sum / (m * m) as f64;
    assert!(
        (avg - newton).abs() <= 1e-9 * newton.abs(),
        "{avg} vs {newton}"
    );
}

#[test]
fn averages_are_rotation_invariant() {
    let mp = masses(1e-3);
    let d = sample_delaunay(&mp);
    let pt = secular_point(d);
    let chart = helio_poincare(&mp);
    let quad = QuadratureSpec::default();
    let base = average_perturbation(&chart, &mp, &pt, &quad).unwrap();
    let rot: Mat3 = rot3(0.7) * rot1(-0.5) * rot3(1.9);
    // rotate one representative state, then read back its secular data
    let hs = chart.helio_target(&pt).unwrap();
    let turned = hs.transform(&rot);
    let rd: [[f64; 5]; 2] = std::array::from_fn(|i| {
        let (rm, cm) = mp.kepler_masses(i);
        let dc = delaunay_forward(turned.y[i], turned.x[i], rm, cm).unwrap();
        [dc.Lambda, dc.Gamma, dc.H, dc.g, dc.h]
    });
    assert!(rd.iter().zip(&d).any(|(a, b)| (a[4] - b[4]).abs() > 0.1));
    let rotated = average_perturbation(&chart, &mp, &secular_point(rd), &quad).unwrap();
    assert!(
        (base - rotated).abs() <= 1e-9 * base.abs(),
        "{base} vs {rotated}"
    );
}

#[test]
fn unresolved_integrand_reports_nonconvergence() {
    let quad = QuadratureSpec {
        nodes_per_angle: 8,
        max_nodes_per_angle: 16,
        rel_tol: 1e-9,
    };
    let r = torus_average_scalar(|p| Ok(1.0 / (1.001 - p[0].cos())), &[0.0], &[0], &quad);
    assert!(matches!(r, Err(Error::QuadratureNotConverged(_))));
    let too_few = QuadratureSpec {
        nodes_per_angle: 4,
        ..QuadratureSpec::default()
    };
    assert!(torus_average_scalar(|_| Ok(1.0), &[0.0], &[0], &too_few).is_err());
}

#[test]
fn rps_origin_is_an_elliptic_secular_equilibrium() {
    let mp = masses(1e-3);
    let lam: Vec<f64> = [1.0, 1.8]
        .iter()
        .enumerate()
        .map(|(i, &a)| lambda_from_a(a, mp.kepler_masses(i).0, mp.kepler_masses(i).1))
        .collect();
    let quad = QuadratureSpec {
        nodes_per_angle: 64,
        max_nodes_per_angle: 128,
        rel_tol: 1e-9,
    };
    let s = rps_secular_origin(&mp, &lam, 1e-3, &quad).unwrap();
    assert!(s.max_gradient <= 1e-6, "{:?}", s.gradient);
    assert!(s.max_real_part <= 1e-6, "{:?}", s.eigenvalues);
    // the non-cyclic directions oscillate with nonzero frequencies
    assert!(s.eigenvalues.iter().filter(|e| e.1.abs() > 1e-3).count() >= 6);
}
