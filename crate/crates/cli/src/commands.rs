use std::path::Path;

use planetary_charts::kepler::elements_from_state;
use planetary_charts::phase_space::{
    hamiltonian_hel, total_angular_momentum, HelioState, MassParams,
};
use planetary_charts::verify::averaging::{average_jacobi_perturbation, fast_angle_indices};
use planetary_charts::verify::{
    average_perturbation, build_chart, chart_at_state, check_cyclic as cyclic,
    check_hel_jac_equivalence, check_symplectic, default_masses, integrate as run_integration,
    run_suite, sample_states, target_hamiltonian, ChartKind, CheckReport, QuadratureSpec,
    ROUND_TRIP_TOL,
};

use crate::io::{helio_from_chart, read_text, write_text, ChartFile, StateFile};
use crate::{CliError, Format, Space};

fn read_state(path: &Path) -> Result<(MassParams, HelioState), CliError> {
    let file = StateFile::parse(&read_text(path)?)?;
    Ok((file.masses()?, file.helio()?))
}

pub fn convert(
    input: &Path,
    from: Space,
    to: Space,
    output: Option<&Path>,
) -> Result<bool, CliError> {
    let text = read_text(input)?;
    let mut residual = 0.0_f64;
    let (mp, hs) = match from {
        Space::Cartesian => {
            let file = StateFile::parse(&text)?;
            (file.masses()?, file.helio()?)
        }
        Space::Chart(kind) => {
            let file = ChartFile::parse(&text)?;
            if file.kind()? != kind {
                return Err(CliError::Usage(format!(
                    "input file holds chart {}, not {}",
                    file.chart,
                    kind.name()
                )));
            }
            let mp = file.masses()?;
            let chart = file.chart(&mp)?;
            residual = residual.max(chart.round_trip(&file.coords)?);
            (mp.clone(), helio_from_chart(&chart, &mp, &file.coords)?)
        }
    };
    let out = match to {
        Space::Cartesian => StateFile::from_helio(&mp, &hs).to_json(),
        Space::Chart(kind) => {
            let (chart, coords) =
                chart_at_state(kind, &mp, &hs).map_err(|e| singular_context(e, kind))?;
            residual = residual.max(chart.round_trip(&coords)?);
            ChartFile::from_chart(&chart, &mp, coords).to_json()
        }
    };
    write_text(output, &out)?;
    eprintln!("round_trip_residual: {residual:.17e}");
    Ok(residual <= ROUND_TRIP_TOL)
}

/// Keeps the error kind and names the chart that is singular at the state.
fn singular_context(e: planetary_charts::Error, kind: ChartKind) -> CliError {
    if e.is_chart_singular() {
        eprintln!("chart {} is singular at this state", kind.name());
    }
    CliError::Compute(e)
}

fn sample_setup(
    chart: ChartKind,
    samples: usize,
    bodies: Option<usize>,
    mu: f64,
) -> Result<MassParams, CliError> {
    let n = bodies.unwrap_or(if chart.two_planets_only() { 2 } else { 3 });
    if n == 0 || samples == 0 {
        return Err(CliError::Usage(
            "need at least one body and one sample".into(),
        ));
    }
    if chart.two_planets_only() && n != 2 {
        return Err(CliError::Usage(format!(
            "chart {} is defined for two planets only",
            chart.name()
        )));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(CliError::Usage(format!("invalid mu {mu}")));
    }
    Ok(default_masses(n, mu))
}

fn emit_report(r: &CheckReport, format: Format) {
    match format {
        Format::Text => print!("{r}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(r).expect("report serializes")
        ),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn check_canonical(
    chart: ChartKind,
    samples: usize,
    seed: u64,
    bodies: Option<usize>,
    mu: f64,
    step: f64,
    tol: f64,
    format: Format,
) -> Result<bool, CliError> {
    let mp = sample_setup(chart, samples, bodies, mu)?;
    if !(step > 0.0 && tol > 0.0) {
        return Err(CliError::Usage("step and tol must be positive".into()));
    }
    let states = sample_states(&mp, samples, seed);
    let r = run_suite("symplectic", chart, &mp, &states, tol, |c, p| {
        check_symplectic(c, p, step, tol)
    });
    emit_report(&r, format);
    Ok(r.passed)
}

#[allow(clippy::too_many_arguments)]
pub fn check_cyclic(
    chart: ChartKind,
    vars: &[String],
    samples: usize,
    seed: u64,
    bodies: Option<usize>,
    mu: f64,
    tol: f64,
    format: Format,
) -> Result<bool, CliError> {
    let mp = sample_setup(chart, samples, bodies, mu)?;
    let labels = build_chart(chart, &mp, Some(1.0))?.labels;
    if let Some(v) = vars.iter().find(|v| !labels.contains(v)) {
        return Err(CliError::Usage(format!(
            "chart {} has no coordinate `{v}`; labels: {}",
            chart.name(),
            labels.join(", ")
        )));
    }
    let states = sample_states(&mp, samples, seed);
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let r = run_suite("cyclic", chart, &mp, &states, tol, |c, p| {
        cyclic(c, &target_hamiltonian(c, &mp), p, &names, tol)
    });
    emit_report(&r, format);
    Ok(r.passed)
}

fn quadrature(nodes: usize, max_nodes: usize) -> Result<QuadratureSpec, CliError> {
    if nodes < 8 || max_nodes < nodes {
        return Err(CliError::Usage("need 8 <= nodes <= max-nodes".into()));
    }
    Ok(QuadratureSpec {
        nodes_per_angle: nodes,
        max_nodes_per_angle: max_nodes,
        ..QuadratureSpec::default()
    })
}

pub fn average(
    input: &Path,
    chart: ChartKind,
    nodes: usize,
    max_nodes: usize,
) -> Result<bool, CliError> {
    let (mp, hs) = read_state(input)?;
    if !matches!(chart, ChartKind::Poincare | ChartKind::Rps) {
        return Err(CliError::Usage(
            "averaging is available in the poincare and rps charts".into(),
        ));
    }
    let quad = quadrature(nodes, max_nodes)?;
    let (spec, point) = chart_at_state(chart, &mp, &hs)?;
    let fast = fast_angle_indices(mp.n());
    let f_av = average_perturbation(&spec, &mp, &point, &quad)?;
    println!("chart: {}", spec.name);
    println!("secular_point:");
    for (k, (label, v)) in spec.labels.iter().zip(&point).enumerate() {
        if !fast.contains(&k) {
            println!("  {label} {v:.17e}");
        }
    }
    println!("f_hel_av: {f_av:.17e}");
    if mp.n() == 2 && chart == ChartKind::Poincare {
        let f_jac = average_jacobi_perturbation(&mp, &point, &quad)?;
        println!("f_jac_av: {f_jac:.17e}");
        println!("gap: {:.17e}", (f_av - f_jac).abs());
    }
    Ok(true)
}

pub fn equivalence(input: &Path, mus: &[f64], nodes: usize) -> Result<bool, CliError> {
    let (mp, hs) = read_state(input)?;
    if mp.n() != 2 {
        return Err(CliError::Usage(
            "the equivalence sweep needs two planets".into(),
        ));
    }
    let quad = quadrature(nodes, 512.max(nodes))?;
    let (_, point) = chart_at_state(ChartKind::Poincare, &mp, &hs)?;
    let sweep = check_hel_jac_equivalence(&mp, &point, mus, &quad)?;
    print_sweep(&sweep);
    Ok(sweep.report.passed)
}

pub fn print_sweep(sweep: &planetary_charts::verify::EquivalenceSweep) {
    println!("# mu f_hel_av f_jac_av d");
    for (mu, h, j, d) in &sweep.rows {
        println!("{mu:.17e} {h:.17e} {j:.17e} {d:.17e}");
    }
    println!("d_at_zero: {:.17e}", sweep.d_at_zero);
    println!("slope: {:.17e}", sweep.slope);
    print!("{}", sweep.report);
}

pub fn integrate(
    input: &Path,
    periods: f64,
    steps_per_period: usize,
    every: usize,
    tol: f64,
) -> Result<bool, CliError> {
    let (mp, hs) = read_state(input)?;
    if !(periods > 0.0 && periods.is_finite()) || steps_per_period == 0 || every == 0 {
        return Err(CliError::Usage(
            "need periods > 0, steps-per-period > 0 and every > 0".into(),
        ));
    }
    let (rm, cm) = mp.kepler_masses(0);
    let a = elements_from_state(hs.y[0], hs.x[0], rm, cm)?.a;
    let period = planetary_charts::verify::sample::kepler_period(&mp, 0, a);
    let traj = run_integration(&hs, &mp, periods * period, period / steps_per_period as f64)?;
    let e0 = hamiltonian_hel(&hs, &mp)?;
    let c0 = total_angular_momentum(&hs);
    println!("# period_1 {period:.17e} step {:.17e}", traj.step);
    println!("# t energy rel_energy_error rel_angular_momentum_error");
    for (k, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        if k % every != 0 && k + 1 != traj.times.len() {
            continue;
        }
        let e = hamiltonian_hel(s, &mp)?;
        let dc = (total_angular_momentum(s) - c0).norm() / c0.norm();
        println!(
            "{t:.17e} {e:.17e} {:.17e} {dc:.17e}",
            (e - e0).abs() / e0.abs()
        );
    }
    let d = &traj.drift;
    println!("drift_energy: {:.17e}", d.energy);
    println!(
        "drift_angular_momentum: {:.17e} {:.17e} {:.17e}",
        d.angular_momentum[0], d.angular_momentum[1], d.angular_momentum[2]
    );
    println!(
        "drift_linear_momentum: {:.17e} {:.17e} {:.17e}",
        d.linear_momentum[0], d.linear_momentum[1], d.linear_momentum[2]
    );
    let passed = d.max() <= tol;
    println!("passed: {passed}");
    Ok(passed)
}
