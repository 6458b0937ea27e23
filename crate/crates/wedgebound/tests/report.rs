use proptest::prelude::*;
use std::f64::consts::PI;
use std::process::Command;
use wedgebound::report::*;
use wedgebound::smatrix::RapidityGrid;

fn only(f: impl FnOnce(&mut Suites)) -> RunConfig {
    let mut c = RunConfig::default();
    c.suites = Suites::none();
    f(&mut c.suites);
    c
}

#[test]
fn default_config_passes_axioms() {
    let rep = run_suite(&only(|s| s.smatrix = true)).unwrap();
    let sm = rep.smatrix.as_ref().unwrap();
    assert!(sm.axioms.all_pass(), "{:#?}", sm.axioms.entries);
    assert!(rep.passed(), "{:#?}", rep.failed_checks());
    assert_eq!(rep.schema_version, "1");
    assert!(rep.counterexamples.is_none() && rep.boundstate.is_none());
}

#[test]
fn counterexamples_only() {
    let rep = run_suite(&only(|s| s.counterexamples = true)).unwrap();
    let cx = rep.counterexamples.as_ref().unwrap();
    assert_eq!(cx.ccr.len(), 2);
    assert_eq!(cx.extension_symbol_zeros.len(), 2);
    assert!(rep.smatrix.is_none() && rep.hardy.is_none() && rep.fock.is_none());
    assert!(rep.checks.iter().all(|c| c.suite == "counterexamples"));
    assert!(rep.passed(), "{:#?}", rep.failed_checks());
    let json: serde_json::Value = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
    assert!(json["counterexamples"]["ccr"].is_array());
    assert!(json["counterexamples"]["extension_symbol_zeros"].is_array());
}

#[test]
fn reports_are_deterministic() {
    let mut c = only(|s| {
        s.smatrix = true;
        s.fock = true;
        s.hardy = true;
        s.counterexamples = true;
    });
    c.seed = 17;
    let a = run_suite(&c).unwrap().without_timestamps().to_json().unwrap();
    let b = run_suite(&c).unwrap().without_timestamps().to_json().unwrap();
    assert_eq!(a, b);
}

#[test]
fn complex_values_are_pairs() {
    let rep = run_suite(&only(|s| s.smatrix = true)).unwrap();
    let json: serde_json::Value = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
    let r = &json["smatrix"]["residue"]["value"];
    assert_eq!(r.as_array().unwrap().len(), 2);
    assert!(r[1].as_f64().unwrap() > 0.0);
}

#[test]
fn invalid_configs_name_their_fields() {
    let err = RunConfig::from_json(r#"{"epsilon": 0.9, "draws": 0, "grid": {"theta_max": 4.0, "n_points": 100}}"#).unwrap_err();
    let ReportError::ConfigInvalid(issues) = err else { panic!("{err}") };
    let fields: Vec<&str> = issues.iter().map(|i| i.field.as_str()).collect();
    assert_eq!(fields, ["epsilon", "grid", "draws"]);

    let err = RunConfig::from_json(r#"{"tolerances": {"axioms": "tight"}}"#).unwrap_err();
    let ReportError::ConfigInvalid(issues) = err else { panic!("{err}") };
    assert_eq!(issues[0].field, "tolerances.axioms");

    let err = RunConfig::from_json(r#"{"blaschke": [{"zero": [0.0, -1.0]}]}"#).unwrap_err();
    let ReportError::ConfigInvalid(issues) = err else { panic!("{err}") };
    assert_eq!(issues[0].field, "blaschke[0].zero");

    let err = RunConfig::from_json(r#"{"pair": {"xi": {"family": "wedge_exp_sech", "a": [0.0, 0.3], "beta": 0.5}}}"#);
    assert!(matches!(err, Err(ReportError::ConfigInvalid(ref v)) if v[0].field == "pair.xi"));

    let mut c = RunConfig::default();
    c.suites = Suites::none();
    assert!(run_suite(&c).is_err());
    assert!(RunConfig::from_json("{}").unwrap() == RunConfig::default());
}

#[test]
fn curves_round_trip_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = only(|s| {
        s.smatrix = true;
        s.epsilon_scan = true;
    });
    c.epsilon = 0.1;
    c.scan.epsilons = vec![0.1];
    c.scan.curve_points = 16;
    let rep = run_suite(&c).unwrap();
    let path = emit_curves(&rep, "re_S_shift_third", dir.path()).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("theta,re_S_shift_third\n"));
    let curve = read_curve(&path).unwrap();
    assert_eq!(curve, rep.curves["re_S_shift_third"]);
    assert!(curve.points.iter().all(|p| p[1] >= 0.0));

    let k = read_curve(&emit_curves(&rep, "ineqK_vs_epsilon", dir.path()).unwrap()).unwrap();
    assert_eq!(k.points.len(), 16);
    assert!(k.points.iter().all(|p| p[0].abs() < PI / 6.0));
    assert_eq!(k.columns[0], "epsilon");

    assert!(matches!(emit_curves(&rep, "nope", dir.path()), Err(ReportError::UnknownCurve(_))));
    let empty = VerificationReport::empty(RunConfig::default());
    for id in CURVE_IDS {
        assert!(matches!(emit_curves(&empty, id, dir.path()), Err(ReportError::UnknownCurve(_))));
    }
}

#[test]
fn suite_errors_are_recorded_and_the_run_continues() {
    let mut c = only(|s| {
        s.boundstate = true;
        s.counterexamples = true;
    });
    // a very narrow profile fails the symbol factorization check; the boundstate suite aborts
    c.pair.xi = FamilySpec::Gaussian { mu: 0.0, sigma: 0.1 };
    c.quadrature_grid = RapidityGrid { theta_max: 8.0, n_points: 64 };
    c.max_level = 1;
    c.draws = 1;
    let rep = run_suite(&c).unwrap();
    assert!(rep.boundstate.is_none());
    assert_eq!(rep.failures.len(), 1);
    assert_eq!(rep.failures[0].suite, "boundstate");
    assert!(rep.failures[0].error.contains("factorization residual"));
    assert!(!rep.passed());
    assert!(rep.counterexamples.is_some());
    assert_eq!(rep.timings.len(), 2);
}

fn grid_strategy() -> impl Strategy<Value = RapidityGrid> {
    (1.0f64..20.0, 6u32..12).prop_map(|(t, p)| RapidityGrid { theta_max: t, n_points: 1 << p })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn config_round_trip(
        eps in -0.52f64..0.52,
        zr in -2.0f64..2.0,
        zi in 0.05f64..3.0,
        grid in grid_strategy(),
        quad in grid_strategy(),
        tol in 1e-14f64..1e-2,
        seed in any::<u64>(),
        flags in any::<[bool; 6]>(),
        level in 1usize..=2,
        draws in 1usize..=100,
        mu in -1.0f64..1.0,
        sigma in 0.5f64..2.0,
    ) {
        prop_assume!(flags.iter().any(|f| *f));
        let mut c = RunConfig::default();
        c.epsilon = eps;
        c.blaschke = vec![BlaschkeSpec { zero: num_complex::Complex64::new(zr, zi), phase: num_complex::Complex64::new(0.6, 0.8) }];
        c.grid = grid;
        c.quadrature_grid = quad;
        c.tolerances.axioms = tol;
        c.tolerances.positivity = tol * 3.0;
        c.seed = seed;
        c.suites = Suites { smatrix: flags[0], epsilon_scan: flags[1], hardy: flags[2], fock: flags[3], boundstate: flags[4], counterexamples: flags[5] };
        c.max_level = level;
        c.draws = draws;
        c.scan.epsilons = vec![eps, -eps];
        c.pair.xi = FamilySpec::Gaussian { mu, sigma };
        c.output.report = Some("out/report.json".into());
        let back = RunConfig::from_json(&c.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wedgebound"))
}

#[test]
fn exit_status_tracks_mandatory_checks() {
    let dir = tempfile::tempdir().unwrap();
    let ok = bin().args(["verify-smatrix", "--out"]).arg(dir.path()).output().unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    let rep: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(rep["schema_version"], "1");
    assert!(dir.path().join("re_S_shift_third.csv").exists());

    let strict = bin().args(["verify-smatrix", "--tol", "1e-30", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(strict.status.code(), Some(1));

    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"epsilon": 2.0}"#).unwrap();
    let bad = bin().args(["full", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("epsilon"));
}
