use holobraid::report::{emit_report, run_suite, SuiteConfig};

fn report(threads: usize) -> String {
    let mut cfg = SuiteConfig::new(3);
    cfg.trials = 12;
    cfg.seed = 9;
    cfg.threads = Some(threads);
    emit_report(&run_suite(&cfg).unwrap()).unwrap()
}

#[test]
fn reports_are_identical_across_runs_and_pools() {
    let a = report(1);
    assert_eq!(a, report(1));
    assert_eq!(a, report(3));
    assert!(!a.contains("timestamp"));
}

#[test]
fn seed_changes_samples() {
    let mut cfg = SuiteConfig::new(3);
    cfg.trials = 2;
    cfg.threads = Some(1);
    let a = run_suite(&cfg).unwrap();
    cfg.seed += 1;
    let b = run_suite(&cfg).unwrap();
    assert_ne!(a.trials[0].params, b.trials[0].params);
}
