use super::*;

#[test]
fn catalog_passes_all_suites() {
    for s in builtin_catalog() {
        let r = run_checks(&s, None, None).unwrap();
        assert!(!r.failed(), "{}", emit_report(&r, Format::Json));
        assert_eq!(r.checks.len(), Suite::ALL.len() + 1 + usize::from(!s.autos.is_empty()));
        for c in &r.checks {
            assert_eq!(c.status == Status::Skipped, c.reason.is_some(), "{}: {}", s.name, c.name);
        }
    }
}

#[test]
fn ex4_classify_witnesses() {
    let r = run_checks(&builtin("EX4").unwrap(), Some(&[Suite::Classify]), None).unwrap();
    let c = r.checks.iter().find(|c| c.name == "classify").unwrap();
    assert_eq!(c.status, Status::Pass);
    assert!(c.witnesses.flags.iter().filter(|(k, _)| k.as_str() != "is_separable").all(|(_, v)| !v));
    assert!(c.witnesses.flags["is_separable"]);
    // L^G_dif = L: the full identity basis
    assert_eq!(c.witnesses.subfields["L^G_dif"].len(), 3);
}

#[test]
fn ex2_correspondence_runs() {
    let r = run_checks(&builtin("EX2").unwrap(), Some(&[Suite::Correspondence, Suite::PiCorrespondence]), None).unwrap();
    assert_eq!(r.status_of("correspondence"), Some(Status::Pass));
    assert_eq!(r.status_of("pi_correspondence"), Some(Status::Skipped));
}

#[test]
fn reports_depend_only_on_scenario_and_seed() {
    let s = builtin("EX3").unwrap();
    let a = emit_report(&run_checks(&s, None, Some(7)).unwrap(), Format::Json);
    let b = emit_report(&run_checks(&s, None, Some(7)).unwrap(), Format::Json);
    assert_eq!(a, b);
    assert!(a.contains("\"seed\": 7"));
}

#[test]
fn wrong_expectations_and_autos_fail() {
    let s = parse_scenario("name W\nbase p=2 vars=t\nstep s: s^2 + s + t\nauto s -> s + t\nexpect group=3\n").unwrap();
    let r = run_checks(&s, None, None).unwrap();
    assert_eq!(r.status_of("expect"), Some(Status::Fail));
    assert_eq!(r.status_of("auto"), Some(Status::Fail));
    let c = &r.checks[0];
    assert_eq!(c.witnesses.mismatch, vec!["group: expected 3, got 2".to_string()]);
}

#[test]
fn describe_lists_dims() {
    let d = describe(&builtin("MIXED").unwrap()).unwrap();
    assert!(d.starts_with("MIXED: [L:K] = 6"));
    assert!(d.contains("L^sep    3"));
}
