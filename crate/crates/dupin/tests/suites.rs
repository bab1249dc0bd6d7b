use dupin::suites::run_suite_named;
use dupin::{run_suite, Status, Suite};

#[test]
fn isoparametric_formulas_all_pass() {
    let cases = run_suite(Suite::IsoparametricFormulas, 0, None);
    assert!(cases.len() >= 600, "{}", cases.len());
    assert!(cases.iter().all(|c| c.passed()), "{:?}", cases.iter().find(|c| !c.passed()));
}

#[test]
fn angle_solvers_include_the_regular_dodecagon() {
    let cases = run_suite(Suite::AngleSolvers, 0, None);
    let c = cases.iter().find(|c| c.case_id == "angle_solvers/g6/solution").unwrap();
    assert_eq!(c.params["expected"], "pi/6");
    assert!(c.passed() && c.residual.unwrap() <= 1e-10);
    assert!(cases.iter().all(|c| c.passed()));
}

#[test]
fn case_ids_are_sorted_and_unique() {
    let cases = run_suite(Suite::SignCertificates, 1, None);
    assert!(cases.windows(2).all(|w| w[0].case_id < w[1].case_id));
    assert!(cases.iter().all(|c| c.passed() && c.seed == 1 && c.suite == "sign_certificates"));
}

#[test]
fn suites_are_deterministic_in_the_seed() {
    let strip = |v: Vec<dupin::VerificationCase>| v.into_iter().map(|c| (c.case_id, c.params, c.residual)).collect::<Vec<_>>();
    let a = strip(run_suite(Suite::LieInvariance, 9, None));
    let b = strip(run_suite(Suite::LieInvariance, 9, None));
    let c = strip(run_suite(Suite::LieInvariance, 10, None));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn tolerance_override_applies_to_every_case() {
    let cases = run_suite(Suite::IsometryReduction, 0, Some(0.0));
    assert!(cases.iter().all(|c| c.tolerance == 0.0));
    assert!(cases.iter().any(|c| c.status == Status::Fail) || cases.iter().all(|c| c.residual == Some(0.0)));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let e = run_suite_named("no_such_suite", 0, None).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    for s in Suite::EACH {
        assert_eq!(Suite::parse(s.name()).unwrap(), s);
    }
}
