use planetary_charts::geom::rot1;
use planetary_charts::node_reductions::{deprit_forward, radau_forward};
use planetary_charts::phase_space::{HelioState, MassParams};
use planetary_charts::verify::sample::reference_two_planet_state;
use planetary_charts::verify::{
    chart_at_state, check_hel_jac_equivalence, check_symplectic, ChartKind, QuadratureSpec,
    SYMPLECTIC_STEP, SYMPLECTIC_TOL,
};

use crate::{CliError, Scenario};

fn reference() -> Result<(MassParams, HelioState), CliError> {
    let mp = MassParams::new(1.0, 1e-3, vec![1.0, 0.7])?;
    let hs = reference_two_planet_state(&mp)?;
    Ok((mp, hs))
}

pub fn run(scenario: Scenario) -> Result<bool, CliError> {
    match scenario {
        Scenario::TwoPlanetInclined => two_planet_inclined(),
        Scenario::PlanarLimit => planar_limit(),
        Scenario::EquivalenceSweep => equivalence_sweep(),
    }
}

fn two_planet_inclined() -> Result<bool, CliError> {
    let (mp, hs) = reference()?;
    let rc = radau_forward(&hs, &mp)?;
    let iota = rc.mutual_inclination()?;
    let c = hs.angular_momenta();
    let between = (c[0].dot(c[1]) / (c[0].norm() * c[1].norm()))
        .clamp(-1.0, 1.0)
        .acos();
    println!(
        "Two planets, a = 1 and 1.8, e = 0.1 and 0.15, orbit normals tilted by 0.1 and 0.25 rad."
    );
    println!("Jacobi-Radau actions at fixed G; the mutual inclination is the triangle angle");
    println!("cos(iota) = (Gamma1^2 + Gamma2^2 - G^2) / (2 Gamma1 Gamma2), opposite to C.");
    println!("Gamma1: {:.17e}", rc.Gamma[0]);
    println!("Gamma2: {:.17e}", rc.Gamma[1]);
    println!("G: {:.17e}", rc.G);
    println!("iota: {iota:.17e}");
    println!("angle_between_C1_C2: {between:.17e}");
    let residual = (iota + between - std::f64::consts::PI).abs();
    println!("iota_plus_angle_minus_pi: {residual:.17e}");
    Ok(residual <= 1e-12)
}

fn planar_limit() -> Result<bool, CliError> {
    let (mp, mut hs) = reference()?;
    for i in 0..2 {
        hs.y[i].0[2] = 0.0;
        hs.x[i].0[2] = 0.0;
    }
    // a common plane tilted away from k3 keeps Θ₀ off its bound |Θ₀| = χ₀
    hs = hs.transform(&rot1(0.3));
    println!(
        "The reference pair flattened into one plane tilted by 0.3 rad: the mutual nodes vanish."
    );
    let deprit = deprit_forward(&hs);
    let radau = radau_forward(&hs, &mp);
    let report = |name: &str, r: Result<(), planetary_charts::Error>| match r {
        Ok(()) => println!("{name}: defined"),
        Err(e) => println!("{name}: singular ({e})"),
    };
    report("deprit", deprit.as_ref().map(|_| ()).map_err(Clone::clone));
    report(
        "jacobi_radau",
        radau.as_ref().map(|_| ()).map_err(Clone::clone),
    );
    let (chart, point) = chart_at_state(ChartKind::Perihelia, &mp, &hs)?;
    let round_trip = chart.round_trip(&point)?;
    println!("perihelia: defined");
    for (label, v) in chart.labels.iter().zip(&point) {
        println!("  {label} {v:.17e}");
    }
    println!("perihelia_round_trip: {round_trip:.17e}");
    let sym = check_symplectic(&chart, &point, SYMPLECTIC_STEP, SYMPLECTIC_TOL)?;
    println!("perihelia_symplectic_deviation: {:.17e}", sym.max_deviation);
    let singular_elsewhere = deprit.err().is_some_and(|e| e.is_chart_singular())
        && radau.err().is_some_and(|e| e.is_chart_singular());
    Ok(singular_elsewhere && round_trip <= 1e-10 && sym.passed)
}

fn equivalence_sweep() -> Result<bool, CliError> {
    let (mp, hs) = reference()?;
    let (_, point) = chart_at_state(ChartKind::Poincare, &mp, &hs)?;
    let mus = [1e-3, 5e-4, 2.5e-4];
    let sweep = check_hel_jac_equivalence(&mp, &point, &mus, &QuadratureSpec::default())?;
    println!("Gap between the heliocentric and Jacobi averaged perturbations at the reference secular point.");
    println!("Both reduce to the averaged Newtonian term at mu = 0, so the gap is O(mu).");
    println!("# mu d d_over_mu");
    for (mu, _, _, d) in &sweep.rows {
        println!("{mu:.17e} {d:.17e} {:.17e}", d / mu);
    }
    println!("d_at_zero: {:.17e}", sweep.d_at_zero);
    println!("slope: {:.17e}", sweep.slope);
    Ok(sweep.report.passed)
}
