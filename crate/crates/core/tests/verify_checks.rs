use planetary_charts::geom::{angle_diff, rot1, rot3, Vec3};
use planetary_charts::phase_space::{hamiltonian_hel, HelioState, MassParams};
use planetary_charts::verify::charts::{
    build_chart, chart_at_state, node_norms, ChartKind, Target,
};
use planetary_charts::verify::checks::{
    check_cyclic, check_round_trip, check_symplectic, check_symplectic_with_warnings,
    target_hamiltonian, CheckReport,
};
use planetary_charts::verify::sample::{default_masses, sample_states, state_from_orbit};
use planetary_charts::Error;

fn two_planets(mu: f64) -> MassParams {
    MassParams::new(1.0, mu, vec![1.0, 0.7]).unwrap()
}

fn tilted_pair(mp: &MassParams, mutual: f64) -> HelioState {
    let n1 = rot1(0.4) * Vec3::K3;
    let n2 = rot3(0.3 * mutual) * (rot1(0.4 + mutual) * Vec3::K3);
    let p1 = n1.cross(Vec3::K1).unit().unwrap();
    let p2 = n2.cross(Vec3::K2).unit().unwrap();
    let (rm1, cm1) = mp.kepler_masses(0);
    let (rm2, cm2) = mp.kepler_masses(1);
    let (y1, x1) = state_from_orbit(1.0, 0.2, 0.7, n1, p1, rm1, cm1).unwrap();
    let (y2, x2) = state_from_orbit(1.9, 0.3, 2.9, n2, p2, rm2, cm2).unwrap();
    HelioState {
        y: vec![y1, y2],
        x: vec![x1, x2],
    }
}

#[test]
fn identity_chart_deviation_is_exactly_zero() {
    let mp = two_planets(1e-3);
    for hs in sample_states(&mp, 5, 1) {
        let (chart, point) = chart_at_state(ChartKind::Identity, &mp, &hs).unwrap();
        let r = check_symplectic(&chart, &point, 1e-5, 1e-7).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert!(r.passed);
    }
}

#[test]
fn delaunay_at_generic_point_is_canonical() {
    let mp = two_planets(1e-3);
    let hs = tilted_pair(&mp, 0.3);
    let (chart, point) = chart_at_state(ChartKind::Delaunay, &mp, &hs).unwrap();
    let r = check_symplectic(&chart, &point, 1e-5, 1e-7).unwrap();
    assert!(r.passed, "{r}");
    assert_eq!(r.per_component.len(), 12);
}

#[test]
fn sign_flipped_angle_fails_at_order_one() {
    let mp = two_planets(1e-3);
    let hs = tilted_pair(&mp, 0.3);
    let (chart, point) = chart_at_state(ChartKind::WrongSign, &mp, &hs).unwrap();
    let r = check_symplectic(&chart, &point, 1e-5, 1e-7).unwrap();
    assert!(!r.passed);
    assert!(r.max_deviation > 0.5, "{r}");
}

#[test]
fn stencil_leaving_domain_is_reported() {
    let mp = two_planets(1e-3);
    let chart = build_chart(ChartKind::Delaunay, &mp, None).unwrap();
    // Γ₁ just below Λ₁: the point is inside, its stencil is not
    let point = [
        1.0,
        1.3,
        1.0 - 1e-8,
        1.2,
        0.5,
        0.6,
        0.1,
        0.2,
        0.3,
        0.4,
        0.5,
        0.6,
    ];
    assert!(chart.in_domain(&point));
    assert!(matches!(
        check_symplectic(&chart, &point, 1e-5, 1e-7),
        Err(Error::DomainViolation(_))
    ));
    let outside = [1.0, 1.3, 1.1, 1.2, 0.5, 0.6, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
    assert!(matches!(
        check_symplectic(&chart, &outside, 1e-5, 1e-7),
        Err(Error::DomainViolation(_))
    ));
    assert!(matches!(
        check_symplectic(&chart, &point, 0.0, 1e-7),
        Err(Error::DomainViolation(_))
    ));
}

#[test]
fn fixed_g_charts_are_canonical_on_their_manifolds() {
    let mp = two_planets(1e-3);
    let hs = tilted_pair(&mp, 0.3);
    for kind in [
        ChartKind::JacobiRadau,
        ChartKind::RadauRegularized,
        ChartKind::FullReduction,
    ] {
        let (chart, point) = chart_at_state(kind, &mp, &hs).unwrap();
        assert_eq!(chart.dim, 8);
        assert_eq!(chart.target_dim, 12);
        assert_eq!(chart.parameter_slots[0].0, "G");
        let r = check_symplectic(&chart, &point, 1e-5, 1e-7).unwrap();
        assert!(r.passed, "{r}");
    }
    let mp3 = default_masses(3, 1e-3);
    let hs3 = &sample_states(&mp3, 1, 4)[0];
    let (chart, point) = chart_at_state(ChartKind::FullReduction, &mp3, hs3).unwrap();
    assert_eq!(chart.dim, 6 * 3 - 4);
    assert!(check_symplectic(&chart, &point, 1e-5, 1e-7).unwrap().passed);
}

#[test]
fn report_text_is_stable() {
    let mut r = CheckReport::new("demo", 1e-7, vec![("a".into(), 1e-9), ("b".into(), 5e-9)]);
    r.warnings.push("near-singular node nu1: 1.000e-7".into());
    let expected = "check: demo\n\
tolerance: 9.99999999999999955e-8\n\
max_deviation: 5.00000000000000010e-9\n\
passed: true\n\
warnings: 1\n  - near-singular node nu1: 1.000e-7\n\
components: 2\n  a 1.00000000000000006e-9\n  b 5.00000000000000010e-9\n";
    assert_eq!(r.to_text(), expected);
    assert_eq!(format!("{r}"), expected);
}

#[test]
fn report_passes_exactly_up_to_tolerance() {
    assert!(CheckReport::new("x", 1e-7, vec![("a".into(), 1e-7)]).passed);
    assert!(!CheckReport::new("x", 1e-7, vec![("a".into(), 1.0000001e-7)]).passed);
    assert!(!CheckReport::new("x", 1e-7, vec![("a".into(), f64::NAN)]).passed);
    let agg = CheckReport::aggregate(
        "agg",
        1e-3,
        &[
            CheckReport::new("x", 1e-3, vec![("a".into(), 1e-4), ("b".into(), 2e-3)]),
            CheckReport::new("x", 1e-3, vec![("a".into(), 3e-4), ("b".into(), 1e-5)]),
        ],
    );
    assert_eq!(
        agg.per_component,
        vec![("a".to_string(), 3e-4), ("b".to_string(), 2e-3)]
    );
    assert!(!agg.passed);
}

#[test]
fn keplerian_hamiltonian_depends_on_lambda_only() {
    let mp = two_planets(0.0);
    let hs = tilted_pair(&mp, 0.3);
    let (chart, point) = chart_at_state(ChartKind::Delaunay, &mp, &hs).unwrap();
    let h = target_hamiltonian(&chart, &mp);
    let vars = ["Gamma1", "Gamma2", "H1", "H2", "g1", "g2", "h1", "h2"];
    let r = check_cyclic(&chart, &h, &point, &vars, 1e-8).unwrap();
    assert!(r.passed, "{r}");
}

#[test]
fn deprit_cyclic_set() {
    let mp = two_planets(1e-3);
    let hs = tilted_pair(&mp, 0.3);
    let (chart, point) = chart_at_state(ChartKind::Deprit, &mp, &hs).unwrap();
    let h = target_hamiltonian(&chart, &mp);
    let r = check_cyclic(&chart, &h, &point, &["C3", "zeta", "psi0"], 1e-6).unwrap();
    assert!(r.passed, "{r}");
    let mp3 = default_masses(3, 1e-3);
    for hs in sample_states(&mp3, 5, 11) {
        let (chart, point) = chart_at_state(ChartKind::Deprit, &mp3, &hs).unwrap();
        let h = target_hamiltonian(&chart, &mp3);
        assert!(
            check_cyclic(&chart, &h, &point, &["C3", "zeta", "psi0"], 1e-6)
                .unwrap()
                .passed
        );
    }
}

#[test]
fn fast_angle_is_not_cyclic() {
    let mp = two_planets(1e-3);
    let hs = tilted_pair(&mp, 0.3);
    let (chart, point) = chart_at_state(ChartKind::Poincare, &mp, &hs).unwrap();
    let h = target_hamiltonian(&chart, &mp);
    let r = check_cyclic(&chart, &h, &point, &["lambda1"], 1e-6).unwrap();
    assert!(!r.passed);
    assert!(r.max_deviation > 1e-5);
    assert!(matches!(
        check_cyclic(&chart, &h, &point, &["nope"], 1e-6),
        Err(Error::DomainViolation(_))
    ));
}

#[test]
fn rps_pulls_back_through_coordinates_target() {
    let mp = default_masses(3, 1e-3);
    let hs = &sample_states(&mp, 1, 2)[0];
    let (chart, point) = chart_at_state(ChartKind::RpsFromDepritA, &mp, hs).unwrap();
    assert_eq!(chart.target, Target::Coords);
    let h = target_hamiltonian(&chart, &mp);
    let value = h(&(chart.inverse)(&point).unwrap()).unwrap();
    let direct = hamiltonian_hel(hs, &mp).unwrap();
    assert!((value - direct).abs() <= 1e-12 * direct.abs());
    assert!(check_round_trip(&chart, &point, 1e-10).unwrap().passed);
}

#[test]
fn charts_compose_both_ways() {
    let mp = default_masses(3, 1e-3);
    let kinds: Vec<ChartKind> = ChartKind::ALL
        .iter()
        .copied()
        .filter(|k| !k.two_planets_only() && !k.fixed_g())
        .filter(|k| {
            build_chart(*k, &mp, None)
                .map(|c| c.target == Target::Helio)
                .unwrap_or(false)
        })
        .filter(|k| *k != ChartKind::WrongSign)
        .collect();
    assert!(kinds.len() >= 7);
    for hs in sample_states(&mp, 4, 21) {
        for &a in &kinds {
            let (ca, pa) = chart_at_state(a, &mp, &hs).unwrap();
            for &b in &kinds {
                let cb = build_chart(b, &mp, None).unwrap();
                let pb = (cb.forward)(&(ca.inverse)(&pa).unwrap()).unwrap();
                let back = (ca.forward)(&(cb.inverse)(&pb).unwrap()).unwrap();
                let dev = pa
                    .iter()
                    .zip(&back)
                    .zip(&ca.angle_mask)
                    .map(|((x, y), &ang)| {
                        if ang {
                            angle_diff(*x, *y).abs()
                        } else {
                            (x - y).abs()
                        }
                    })
                    .fold(0.0, f64::max);
                assert!(dev <= 1e-9, "{a} -> {b}: {dev:e}");
            }
        }
    }
}

#[test]
fn near_singular_nodes_are_warnings() {
    let mp = two_planets(1e-3);
    let hs = tilted_pair(&mp, 1e-7);
    let nu1 = node_norms(&hs, &mp)
        .into_iter()
        .find(|(n, _)| n == "nu1")
        .unwrap()
        .1;
    assert!(nu1 > 1e-12 && nu1 < 1e-6, "{nu1}");
    let (chart, point) = chart_at_state(ChartKind::Delaunay, &mp, &hs).unwrap();
    let r = check_symplectic_with_warnings(&chart, &mp, &point, 1e-5, 1e-7).unwrap();
    assert!(r.passed);
    assert!(
        r.warnings.iter().any(|w| w.contains("nu1")),
        "{:?}",
        r.warnings
    );
}

#[test]
fn chart_names_parse_and_reject_unknown() {
    for &k in ChartKind::ALL {
        assert_eq!(k.name().parse::<ChartKind>().unwrap(), k);
    }
    assert_eq!(
        "nonsense".parse::<ChartKind>(),
        Err(Error::UnknownChart("nonsense".into()))
    );
}

#[test]
fn two_planet_charts_refuse_other_counts() {
    let mp = default_masses(3, 1e-3);
    let hs = &sample_states(&mp, 1, 0)[0];
    assert_eq!(
        chart_at_state(ChartKind::JacobiRadau, &mp, hs).err(),
        Some(Error::UnsupportedBodyCount(3))
    );
}
