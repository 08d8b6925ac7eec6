use motion2_core::inductive::{run_verification_suite, Defect};
use motion2_core::io::{read_reports, reports_to_json, to_pretty};
use motion2_core::Mode;

#[test]
fn default_configuration_passes() {
    let reports = run_verification_suite(1.5, 64, 42, 1e-10).unwrap();
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    let names: Vec<&str> = reports.iter().map(|r| r.check.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for required in [
        "rep_unitarity",
        "rep_homomorphism",
        "rep_cross_path",
        "d_rep_finite_difference",
        "d_rep_bracket",
        "isotypic_algebra",
        "lemma2_defect",
        "lemma3_recurrence",
        "b_stability",
        "reconstruction",
    ] {
        assert!(names.contains(&required), "missing {required}");
    }
}

#[test]
fn reports_are_well_formed() {
    let reports = run_verification_suite(-0.75, 24, 7, 1e-10).unwrap();
    for r in &reports {
        assert!(r.tolerance >= 0.0);
        match (&r.defect, r.mode) {
            (Defect::Float(d), Mode::Numeric) => {
                assert!(*d >= 0.0);
                assert_eq!(r.pass, *d <= r.tolerance, "{}", r.check);
            }
            (Defect::Exact(s), Mode::Exact) => {
                assert!(!s.starts_with('-'));
                assert_eq!(r.pass, s == "0/1", "{}", r.check);
            }
            other => panic!("{}: defect {other:?} does not match mode", r.check),
        }
        assert_eq!(r.params["N"], 24);
        assert_eq!(r.params["seed"], 7);
    }
    assert!(reports.iter().all(|r| r.pass), "{reports:#?}");
}

#[test]
fn deterministic_and_roundtrips() {
    let a = to_pretty(&reports_to_json(&run_verification_suite(1.5, 16, 3, 1e-10).unwrap()));
    let b = to_pretty(&reports_to_json(&run_verification_suite(1.5, 16, 3, 1e-10).unwrap()));
    assert_eq!(a, b);
    let parsed = read_reports(&a).unwrap();
    assert_eq!(to_pretty(&reports_to_json(&parsed)), a);
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(run_verification_suite(0.0, 16, 1, 1e-10).is_err());
    assert!(run_verification_suite(f64::NAN, 16, 1, 1e-10).is_err());
    assert!(run_verification_suite(1.0, 0, 1, 1e-10).is_err());
    assert!(run_verification_suite(1.0, 16, 1, 0.0).is_err());
}
