use lie_semigroup_cli::scenario::Scenario;
use lie_semigroup_cli::{run, run_suite, EXIT_FAIL, EXIT_PASS};
use proptest::prelude::*;

fn exit_code(args: &[String]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The exit code is 0 exactly when every report passes.
    #[test]
    fn exit_code_tracks_reports(a in -2.0f64..2.0, log_tol in -14i32..-2) {
        let action = format!("y + ({a})*t*y^2");
        let tol = 10f64.powi(log_tol);
        let dir = tempfile::tempdir().unwrap();
        let scenario = dir.path().join("s.json");
        std::fs::write(&scenario, format!(
            r#"{{"suite": "composition", "expressions": {{"action": "{action}"}}, "tolerances": {{"composition": {tol:e}}}}}"#
        )).unwrap();
        let (code, text) = exit_code(&[
            "liesemi".into(), "verify".into(), "--scenario".into(), scenario.to_str().unwrap().into(),
        ]);
        let parsed: Scenario = Scenario::load(&scenario).unwrap();
        let report = run_suite(&parsed, "composition").unwrap();
        let all_pass = report.suites.iter().flat_map(|s| &s.reports).all(|r| r.succeeded());
        prop_assert_eq!(code, if all_pass { EXIT_PASS } else { EXIT_FAIL }, "{}", text);
        prop_assert_eq!(report.passed, all_pass);
    }

    /// Reports depend on nothing but the scenario and the seed.
    #[test]
    fn reports_are_reproducible(seed in any::<u64>()) {
        let s = Scenario { seed: Some(seed), ..Scenario::default() };
        let a = serde_json::to_string(&run_suite(&s, "recovery-cross-check").unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(&s, "recovery-cross-check").unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}
