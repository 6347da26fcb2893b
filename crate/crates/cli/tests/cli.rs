use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const STATE: &str = r#"{"m0":1.0,"mu":0.001,"m":[1.0,0.7],
"y":[[0.0,1.05,0.1],[0.02,-0.55,0.3]],"x":[[0.95,0.0,0.02],[-1.7,0.1,0.2]]}"#;

const PLANAR: &str = r#"{"m0":1.0,"mu":0.001,"m":[1.0,0.7],
"y":[[0.0,1.05,0.0],[0.02,-0.55,0.0]],"x":[[0.95,0.0,0.0],[-1.7,0.1,0.0]]}"#;

fn pcharts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcharts"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .trim()
        .parse()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn flat(v: &Value, key: &str) -> Vec<f64> {
    v[key]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|row| row.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()))
        .collect()
}

#[test]
fn cartesian_delaunay_cartesian_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.json", STATE);
    let mid = dir.path().join("d.json");
    let mid = mid.to_str().unwrap();
    let o = pcharts(&[
        "convert",
        "--input",
        &input,
        "--from",
        "cartesian",
        "--to",
        "delaunay",
        "--output",
        mid,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(field(&stderr(&o), "round_trip_residual") <= 1e-10);
    let chart: Value = serde_json::from_str(&std::fs::read_to_string(mid).unwrap()).unwrap();
    assert_eq!(chart["chart"], "delaunay");
    assert_eq!(chart["coords"].as_array().unwrap().len(), 12);

    let o = pcharts(&[
        "convert",
        "--input",
        mid,
        "--from",
        "delaunay",
        "--to",
        "cartesian",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(field(&stderr(&o), "round_trip_residual") <= 1e-10);
    let back: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let orig: Value = serde_json::from_str(STATE).unwrap();
    for key in ["y", "x"] {
        for (a, b) in flat(&back, key).iter().zip(flat(&orig, key)) {
            assert!((a - b).abs() <= 1e-12, "{key}: {a} vs {b}");
        }
    }
}

#[test]
fn fixed_g_chart_files_carry_g() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.json", STATE);
    let o = pcharts(&[
        "convert",
        "--input",
        &input,
        "--from",
        "cartesian",
        "--to",
        "jacobi_radau",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let chart: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(chart["parameters"]["G"].as_f64().unwrap() > 0.0);
    let mid = write(dir.path(), "r.json", &stdout(&o));
    let o = pcharts(&[
        "convert",
        "--input",
        &mid,
        "--from",
        "jacobi_radau",
        "--to",
        "full_reduction",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn planar_state_converts_to_perihelia_but_not_deprit() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", PLANAR);
    let o = pcharts(&[
        "convert",
        "--input",
        &input,
        "--from",
        "cartesian",
        "--to",
        "perihelia",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = pcharts(&[
        "convert",
        "--input",
        &input,
        "--from",
        "cartesian",
        "--to",
        "deprit",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ν1"), "{}", stderr(&o));
}

#[test]
fn canonicity_checks_pass_for_rps_and_perihelia() {
    for chart in ["rps", "perihelia"] {
        let o = pcharts(&[
            "check-canonical",
            "--chart",
            chart,
            "--samples",
            "100",
            "--seed",
            "7",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let out = stdout(&o);
        assert!(field(&out, "max_deviation") <= 1e-7);
        assert!(out.starts_with(&format!("check: symplectic[{chart}]")));
    }
}

#[test]
fn failing_check_exits_one() {
    let o = pcharts(&["check-canonical", "--chart", "wrong_sign", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(field(&stdout(&o), "max_deviation") > 0.5);
}

#[test]
fn unknown_chart_is_a_usage_error() {
    let o = pcharts(&["check-canonical", "--chart", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("unknown chart `nonsense`") && err.contains("Usage"),
        "{err}"
    );
}

#[test]
fn malformed_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"m0\": 1.0,");
    let o = pcharts(&[
        "convert",
        "--input",
        &bad,
        "--from",
        "cartesian",
        "--to",
        "delaunay",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = pcharts(&[
        "convert",
        "--input",
        "/nonexistent/state.json",
        "--from",
        "cartesian",
        "--to",
        "delaunay",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = pcharts(&["check-cyclic", "--chart", "deprit", "--vars", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pcharts(&[
        "check-canonical",
        "--chart",
        "jacobi_radau",
        "--bodies",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn deprit_cyclic_variables() {
    let o = pcharts(&[
        "check-cyclic",
        "--chart",
        "deprit",
        "--vars",
        "C3,zeta,psi0",
        "--samples",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = pcharts(&[
        "check-cyclic",
        "--chart",
        "poincare",
        "--vars",
        "lambda1",
        "--samples",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["passed"], false);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "check-canonical",
        "--chart",
        "perihelia",
        "--samples",
        "5",
        "--seed",
        "3",
    ];
    let a = pcharts(&args);
    let b = pcharts(&args);
    assert_eq!(a.stdout, b.stdout);
    let other = pcharts(&[
        "check-canonical",
        "--chart",
        "perihelia",
        "--samples",
        "5",
        "--seed",
        "4",
    ]);
    assert_ne!(a.stdout, other.stdout);
    assert_eq!(
        pcharts(&["demo", "equivalence-sweep"]).stdout,
        pcharts(&["demo", "equivalence-sweep"]).stdout
    );
}

#[test]
fn equivalence_sweep_table_has_unit_slope() {
    let o = pcharts(&["demo", "equivalence-sweep"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<f64>> = out
        .lines()
        .skip_while(|l| !l.starts_with("# mu"))
        .skip(1)
        .take_while(|l| !l.contains(':'))
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows
        .iter()
        .all(|r| r.len() == 3 && (r[1] / r[0] - r[2]).abs() <= 1e-12 * r[2]));
    // least-squares slope of log d against log μ
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r[0].ln(), r[1].ln())).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope - 1.0).abs() <= 0.1, "{slope}");
    assert!((field(&out, "slope") - slope).abs() <= 1e-9);
    assert!(field(&out, "d_at_zero") <= 1e-12);
}

#[test]
fn inclined_demo_reports_the_triangle_inclination() {
    let o = pcharts(&["demo", "two-planet-inclined"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let (g1, g2, g) = (
        field(&out, "Gamma1"),
        field(&out, "Gamma2"),
        field(&out, "G"),
    );
    let iota = ((g1 * g1 + g2 * g2 - g * g) / (2.0 * g1 * g2)).acos();
    assert!((field(&out, "iota") - iota).abs() <= 1e-12);
    // the reference normals are tilted by 0.1 and 0.25 rad on opposite sides
    assert!((field(&out, "angle_between_C1_C2") - 0.35).abs() <= 1e-12);
}

#[test]
fn planar_demo_shows_perihelia_succeeding() {
    let o = pcharts(&["demo", "planar-limit"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("deprit: singular (vanishing node ν1)"));
    assert!(out.contains("jacobi_radau: singular"));
    assert!(field(&out, "perihelia_round_trip") <= 1e-10);
    assert!(field(&out, "perihelia_symplectic_deviation") <= 1e-7);
}

#[test]
fn integration_reports_small_drift() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.json", STATE);
    let o = pcharts(&[
        "integrate",
        "--input",
        &input,
        "--periods",
        "5",
        "--every",
        "50",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(field(&out, "drift_energy") <= 1e-8);
    let rows = out
        .lines()
        .filter(|l| !l.starts_with('#') && !l.contains(':'))
        .count();
    assert_eq!(rows, 11);
}

#[test]
fn averaging_reports_both_averages() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.json", STATE);
    let o = pcharts(&["average", "--input", &input]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let (h, j) = (field(&out, "f_hel_av"), field(&out, "f_jac_av"));
    assert!(h < 0.0 && (h - j).abs() < 1e-2 * h.abs());
    let o = pcharts(&["average", "--input", &input, "--chart", "delaunay"]);
    assert_eq!(o.status.code(), Some(2));
}
