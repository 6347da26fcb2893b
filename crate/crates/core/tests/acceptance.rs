//! Acceptance suite: one line per criterion. Runs as a plain binary so the
//! lines appear in every `cargo test` log.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use planetary_charts::geom::{rot1, rot3};
use planetary_charts::kepler::{
    delaunay_forward, delaunay_inverse, kepler_energy, planar_poincare, DelaunayCoords,
    PlanarPoincare,
};
use planetary_charts::node_reductions::{
    deprit_forward, deprit_planetary, deprit_planetary_forward, radau_forward, radau_inverse,
    radau_regularized_inverse, DepritPlanetaryCoords, JacobiRadauCoords, RadauRegularized,
};
use planetary_charts::phase_space::{hamiltonian_full, hamiltonian_hel, HelioState, MassParams};
use planetary_charts::regular_charts::{
    fullred_forward, fullred_inverse, perihelia_forward, perihelia_inverse, reflect_full_reduction,
    reflect_perihelia, rps_from_cartesian, rps_to_cartesian, FullRedCoords, ReflectionKind,
    RpsCoords,
};
use planetary_charts::verify::averaging::{
    check_hel_jac_equivalence, torus_average, QuadratureSpec,
};
use planetary_charts::verify::charts::{chart_at_state, lift_state, ChartKind, Target};
use planetary_charts::verify::checks::{check_cyclic, target_hamiltonian};
use planetary_charts::verify::integrate::integrate;
use planetary_charts::verify::sample::{
    default_masses, kepler_period, reference_two_planet_state, sample_states,
};
use planetary_charts::verify::{conserved_pair_drift, round_trip_suite, symplectic_suite};

const SEED: u64 = 7;
const SAMPLES: usize = 100;
const MU: f64 = 1e-3;

/// Criteria expected to stay red; see the README.
const KNOWN_RED: &[usize] = &[7];

const CHARTS: [ChartKind; 11] = [
    ChartKind::Heliocentric,
    ChartKind::JacobiLinear,
    ChartKind::HelJac,
    ChartKind::Delaunay,
    ChartKind::Poincare,
    ChartKind::JacobiRadau,
    ChartKind::Deprit,
    ChartKind::DepritPlanetary,
    ChartKind::Rps,
    ChartKind::FullReduction,
    ChartKind::Perihelia,
];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

struct Samples {
    mp2: MassParams,
    mp3: MassParams,
    s2: Vec<HelioState>,
    s3: Vec<HelioState>,
}

impl Samples {
    fn new() -> Self {
        let mp2 = default_masses(2, MU);
        let mp3 = default_masses(3, MU);
        let s2 = sample_states(&mp2, SAMPLES, SEED);
        let s3 = sample_states(&mp3, SAMPLES, SEED);
        Samples { mp2, mp3, s2, s3 }
    }

    fn for_chart(&self, kind: ChartKind) -> (&MassParams, &[HelioState]) {
        if kind.two_planets_only() {
            (&self.mp2, &self.s2)
        } else {
            (&self.mp3, &self.s3)
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn suite(
    samples: &Samples,
    run: fn(ChartKind, &MassParams, &[HelioState]) -> planetary_charts::verify::CheckReport,
) -> Outcome {
    let mut worst = (0.0_f64, "");
    let mut failed = vec![];
    for kind in CHARTS {
        let (mp, states) = samples.for_chart(kind);
        let r = run(kind, mp, states);
        if !r.passed {
            failed.push(kind.name());
        }
        if r.max_deviation.is_nan() || r.max_deviation > worst.0 {
            worst = (r.max_deviation, kind.name());
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "{} charts x {SAMPLES} samples, worst {:.2e} ({}), failing {:?}",
            CHARTS.len(),
            worst.0,
            worst.1,
            failed
        ),
    )
}

fn criterion_1(s: &Samples) -> Outcome {
    suite(s, symplectic_suite)
}

fn criterion_2(s: &Samples) -> Outcome {
    suite(s, round_trip_suite)
}

fn criterion_3(s: &Samples) -> Outcome {
    let mut worst = 0.0_f64;
    let mut worst_kepler = 0.0_f64;
    for kind in CHARTS {
        let (mp, states) = s.for_chart(kind);
        let mp0 = mp.with_mu(0.0);
        for hs in states.iter().take(20) {
            let (chart, point) = chart_at_state(kind, mp, hs).unwrap();
            let h = target_hamiltonian(&chart, mp)(&(chart.inverse)(&point).unwrap()).unwrap();
            let direct = match chart.target {
                Target::Full => hamiltonian_full(&lift_state(hs), mp).unwrap(),
                _ => hamiltonian_hel(hs, mp).unwrap(),
            };
            worst = worst.max(rel(h, direct));

            let lambda: Vec<usize> = (0..chart.dim)
                .filter(|&k| chart.labels[k].starts_with("Lambda"))
                .collect();
            if lambda.is_empty() {
                continue;
            }
            let (chart0, point0) = chart_at_state(kind, &mp0, hs).unwrap();
            let h0 =
                target_hamiltonian(&chart0, &mp0)(&(chart0.inverse)(&point0).unwrap()).unwrap();
            let kep: f64 = lambda
                .iter()
                .enumerate()
                .map(|(i, &k)| {
                    let (rm, cm) = mp0.kepler_masses(i);
                    kepler_energy(point0[k], rm, cm)
                })
                .sum();
            worst_kepler = worst_kepler.max(rel(h0, kep));
        }
    }
    outcome(
        worst <= 1e-12 && worst_kepler <= 1e-12,
        format!(
            "pullback vs Cartesian {worst:.2e}, Keplerian limit {worst_kepler:.2e} (tol 1e-12)"
        ),
    )
}

fn criterion_4(s: &Samples) -> Outcome {
    let mut cyc = 0.0_f64;
    for (mp, states) in [(&s.mp2, &s.s2), (&s.mp3, &s.s3)] {
        for hs in states.iter().take(20) {
            let (chart, point) = chart_at_state(ChartKind::Deprit, mp, hs).unwrap();
            let h = target_hamiltonian(&chart, mp);
            let r = check_cyclic(&chart, &h, &point, &["C3", "zeta", "psi0"], 1e-6).unwrap();
            cyc = cyc.max(r.max_deviation);
        }
    }
    let mp = MassParams::new(1.0, MU, vec![1.0, 0.7]).unwrap();
    let hs = reference_two_planet_state(&mp).unwrap();
    let p1 = kepler_period(&mp, 0, 1.0);
    let traj = integrate(&hs, &mp, 10.0 * p1, p1 / 100.0).unwrap();
    let (drift, _) = conserved_pair_drift(&traj, &mp).unwrap();
    outcome(
        cyc <= 1e-6 && drift <= 1e-6,
        format!("Deprit partials in C3, zeta, psi0 {cyc:.2e}; RPS (p0, q0) drift over 10 periods {drift:.2e} (tol 1e-6)"),
    )
}

fn criterion_5() -> Outcome {
    let mp = MassParams::new(1.0, MU, vec![1.0, 0.7]).unwrap();
    let hs = reference_two_planet_state(&mp).unwrap();
    let quad = QuadratureSpec::default();
    let (chart, point) = chart_at_state(ChartKind::Delaunay, &mp, &hs).unwrap();
    let mut residual = 0.0_f64;
    for i in 0..2 {
        let ell = chart
            .labels
            .iter()
            .position(|l| *l == format!("ell{}", i + 1))
            .unwrap();
        let avg = torus_average(
            |p| {
                let t = HelioState::from_flat(&(chart.inverse)(p)?);
                let (y, x) = (t.y[i], t.x[i]);
                let r3 = x.norm().powi(3);
                Ok(vec![y[0], y[1], y[2], x[0] / r3, x[1] / r3, x[2] / r3])
            },
            &point,
            &[ell],
            &quad,
        )
        .unwrap();
        residual = avg.iter().fold(residual, |m, v| m.max(v.abs()));
    }
    let (_, secular) = chart_at_state(ChartKind::Poincare, &mp, &hs).unwrap();
    let sweep = check_hel_jac_equivalence(&mp, &secular, &[1e-3, 5e-4, 2.5e-4], &quad).unwrap();
    outcome(
        residual <= 1e-10 && sweep.report.passed,
        format!(
            "zero-average residual {residual:.2e} (tol 1e-10); slope {:.4} (1 +- 0.1)",
            sweep.slope
        ),
    )
}

fn criterion_6() -> Outcome {
    let mp = MassParams::new(1.0, MU, vec![1.0, 0.7]).unwrap();
    let rc = JacobiRadauCoords {
        Lambda: [1.0, 1.5],
        Gamma: [0.97, 1.4],
        ell: [0.4, 2.3],
        g: [1.1, 5.0],
        G: 2.2,
    };
    let radau = radau_inverse(&rc, &mp).unwrap();
    let deprit = deprit_planetary(
        &DepritPlanetaryCoords {
            Lambda: rc.Lambda.to_vec(),
            Gamma: rc.Gamma.to_vec(),
            C3: rc.G,
            Psi: vec![rc.G],
            ell: rc.ell.to_vec(),
            gamma: vec![rc.g[0], rc.g[1] + PI],
            zeta: 0.0,
            psi: vec![0.0],
        },
        &mp,
    )
    .unwrap();
    let d_deprit = deprit.max_abs_diff(&radau);

    let reg = RadauRegularized {
        Lambda: [1.0, 1.5],
        lam: [0.3, 4.1],
        h_hat: [0.05, -0.08],
        x_hat: [0.11, 0.02],
        G: 2.3,
    };
    let full = fullred_inverse(&FullRedCoords::from_vec(&reg.to_vec(), 2, reg.G), &mp).unwrap();
    let d_full = full.max_abs_diff(&radau_regularized_inverse(&reg, &mp).unwrap());

    let mp3 = default_masses(3, MU);
    let r = RpsCoords {
        Lambda: vec![1.0, 1.6, 2.2],
        lam: vec![0.3, 2.0, 4.0],
        eta: vec![0.1, -0.2, 0.05],
        xi: vec![0.0, 0.15, -0.3],
        p: vec![0.0; 3],
        q: vec![0.0; 3],
    };
    let hs = rps_to_cartesian(&r, &mp3).unwrap();
    let mut d_rps = 0.0_f64;
    for i in 0..3 {
        let (rm, cm) = mp3.kepler_masses(i);
        let pp = PlanarPoincare {
            Lambda: r.Lambda[i],
            lam: r.lam[i],
            eta: r.eta[i],
            xi: r.xi[i],
        };
        let (y, x) = planar_poincare(&pp, rm, cm).unwrap();
        d_rps = d_rps
            .max((y - hs.y[i]).max_abs())
            .max((x - hs.x[i]).max_abs());
    }
    let worst = d_deprit.max(d_full).max(d_rps);
    outcome(
        worst <= 1e-12,
        format!("Deprit/Radau {d_deprit:.2e}, full reduction/regularized Radau {d_full:.2e}, RPS/planar Poincare {d_rps:.2e} (tol 1e-12)"),
    )
}

/// Returns the outcome and whether the known-red part behaves as analyzed.
fn criterion_7(s: &Samples) -> (Outcome, bool) {
    let (mp, states) = (&s.mp3, &s.s3);
    let mut ham = 0.0_f64;
    let mut peri = 0.0_f64;
    for (k, hs) in states.iter().take(20).enumerate() {
        let h0 = hamiltonian_hel(hs, mp).unwrap();
        let rot = rot3(0.37 * k as f64) * rot1(1.1 - 0.05 * k as f64) * rot3(2.0 + 0.2 * k as f64);
        ham = ham.max(rel(hamiltonian_hel(&hs.transform(&rot), mp).unwrap(), h0));
        for kind in [ReflectionKind::First, ReflectionKind::Second] {
            let (sy, sx) = kind.cartesian_signs();
            ham = ham.max(rel(hamiltonian_hel(&hs.reflect(sy, sx), mp).unwrap(), h0));
        }
        let c = perihelia_forward(hs, mp).unwrap();
        let a = perihelia_inverse(&reflect_perihelia(&c), mp).unwrap();
        peri = peri.max(a.max_abs_diff(&hs.reflect([1.0, -1.0, 1.0], [1.0, -1.0, 1.0])));
    }
    // witness: body-wise conjugation of the reflection in the full-reduction chart
    let hs = &states[0];
    let f = fullred_forward(hs, mp).unwrap();
    let base = fullred_inverse(&f, mp).unwrap();
    let kind = ReflectionKind::First;
    let a = fullred_inverse(&reflect_full_reduction(&f, kind), mp).unwrap();
    let (sy, sx) = kind.cartesian_signs();
    let b = base.reflect(sy, sx);
    let dev: Vec<f64> = (0..3)
        .map(|i| (a.x[i] - b.x[i]).max_abs().max((a.y[i] - b.y[i]).max_abs()))
        .collect();
    let invariants = ham <= 1e-12 && peri <= 1e-10;
    let witness = dev[0] >= 1e-3;
    let as_analyzed = invariants && dev[0] <= 1e-12 && dev[1] >= 1e-3 && dev[2] >= 1e-3;
    (
        outcome(
            invariants && witness,
            format!(
                "H invariance {ham:.2e} (tol 1e-12); perihelia reflection {peri:.2e} (tol 1e-10); \
                 full-reduction conjugation per body {:.2e} {:.2e} {:.2e}: body 1 expected >= 1e-3",
                dev[0], dev[1], dev[2]
            ),
        ),
        as_analyzed,
    )
}

fn circular(hs: &mut HelioState, mp: &MassParams, i: usize) {
    let (rm, cm) = mp.kepler_masses(i);
    let d = delaunay_forward(hs.y[i], hs.x[i], rm, cm).unwrap();
    let c = DelaunayCoords {
        Gamma: d.Lambda,
        ..d
    };
    (hs.y[i], hs.x[i]) = delaunay_inverse(&c, rm, cm).unwrap();
}

fn criterion_8(s: &Samples) -> Outcome {
    let mp = &s.mp2;
    let mut planar = s.s2[0].clone();
    for i in 0..2 {
        planar.y[i].0[2] = 0.0;
        planar.x[i].0[2] = 0.0;
    }
    let sing = |r: planetary_charts::Error| r.is_chart_singular();
    let planar_ok = radau_forward(&planar, mp).err().is_some_and(sing)
        && deprit_forward(&planar).err().is_some_and(sing)
        && perihelia_forward(&planar, mp).is_ok();

    let mut round = s.s2[0].clone();
    circular(&mut round, mp, 0);
    let delaunay = round
        .y
        .iter()
        .zip(&round.x)
        .enumerate()
        .any(|(i, (&y, &x))| {
            delaunay_forward(y, x, mp.kepler_masses(i).0, mp.kepler_masses(i).1)
                .err()
                .is_some_and(sing)
        });
    let round_ok = delaunay
        && deprit_planetary_forward(&round, mp).err().is_some_and(sing)
        && perihelia_forward(&round, mp).err().is_some_and(sing)
        && chart_at_state(ChartKind::Poincare, mp, &round).is_ok()
        && rps_from_cartesian(&round, mp).is_ok()
        && chart_at_state(ChartKind::Rps, mp, &round).is_ok();
    outcome(
        planar_ok && round_ok,
        format!("planar state contract {planar_ok}; zero-eccentricity contract {round_ok}"),
    )
}

fn criterion_9() -> Outcome {
    let mp = MassParams::new(1.0, MU, vec![1.0, 0.7]).unwrap();
    let hs = reference_two_planet_state(&mp).unwrap();
    let p1 = kepler_period(&mp, 0, 1.0);
    let traj = integrate(&hs, &mp, 100.0 * p1, p1 / 100.0).unwrap();
    let d = &traj.drift;
    let c = d.angular_momentum.iter().fold(0.0_f64, |a, &b| a.max(b));
    let p = d.linear_momentum.iter().fold(0.0_f64, |a, &b| a.max(b));
    outcome(
        d.max() <= 1e-8,
        format!(
            "100 periods at dt = P1/100: E {:.2e}, C {c:.2e}, P {p:.2e} (tol 1e-8)",
            d.energy
        ),
    )
}

fn main() -> ExitCode {
    let samples = Samples::new();
    let (c7, c7_as_analyzed) = criterion_7(&samples);
    type Run<'a> = (usize, &'static str, Box<dyn Fn() -> Outcome + 'a>);
    let runs: Vec<Run> = vec![
        (1, "symplecticity", Box::new(|| criterion_1(&samples))),
        (2, "round trips", Box::new(|| criterion_2(&samples))),
        (
            3,
            "Hamiltonian consistency",
            Box::new(|| criterion_3(&samples)),
        ),
        (4, "cyclic variables", Box::new(|| criterion_4(&samples))),
        (5, "averaging identities", Box::new(criterion_5)),
        (6, "cross-chart consistency", Box::new(criterion_6)),
        (
            8,
            "singularity contract",
            Box::new(|| criterion_8(&samples)),
        ),
        (9, "conservation under integration", Box::new(criterion_9)),
    ];
    let mut results = vec![];
    for (k, name, run) in runs {
        let start = Instant::now();
        let o = run();
        results.push((k, name, o, start.elapsed().as_secs_f64()));
    }
    results.insert(6, (7, "symmetries", c7, 0.0));

    let mut ok = true;
    for (k, name, o, secs) in &results {
        let known = KNOWN_RED.contains(k);
        let status = match (o.passed, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known, see README)",
            (false, false) => "FAIL",
        };
        println!("acceptance {k} {name}: {status}: {} [{secs:.1}s]", o.detail);
        if !o.passed && !known {
            ok = false;
        }
        if known && o.passed {
            println!("acceptance {k}: expected red but passed; update KNOWN_RED");
            ok = false;
        }
    }
    if !c7_as_analyzed {
        println!("acceptance 7: reflection witness no longer behaves as analyzed");
        ok = false;
    }
    if ok {
        println!("acceptance: all criteria as expected");
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
