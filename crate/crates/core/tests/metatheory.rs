//! Metatheory suites over generated specs, with and without a deliberately
//! wrong interpreter.

use act::metatheory::{run, MetaConfig};
use act::semantics::Mutation;

fn cfg(cases: usize, mutation: Mutation) -> MetaConfig {
    MetaConfig {
        cases,
        mutation,
        ..MetaConfig::default()
    }
}

#[test]
fn seed_42_passes() {
    let r = run(&cfg(100, Mutation::None));
    assert!(r.passed, "{}", r.render_human());
    assert_eq!(r.stats.total_failed(), 0);
    assert_eq!(r.specs_accepted, 100);
    assert!(r.stats.preservation.checked > 0);
    assert!(r.stats.progress.checked > 0);
}

#[test]
fn every_mutation_is_caught_with_a_reproducer() {
    let expect = [
        (Mutation::SequentialUpdates, "two-phase-updates"),
        (Mutation::FreshReuse, "preservation"),
        (Mutation::FirstCaseWins, "case-selection"),
    ];
    for (m, property) in expect {
        let r = run(&cfg(100, m));
        assert!(!r.passed, "{} went unnoticed", m.name());
        let rep = r.failure.as_ref().expect("reproducer");
        assert_eq!(rep.property, property, "{}", m.name());
        let text = rep.render();
        assert!(text.contains("spec:") && text.contains("entry:"), "{}", text);
        act::parser::parse_spec(&rep.spec).expect("the reproducer spec parses");
    }
}

#[test]
fn zero_cases_pass_vacuously() {
    let r = run(&cfg(0, Mutation::None));
    assert!(r.passed);
    assert_eq!(r.instances, 0);
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let a = act::json::to_pretty(&run(&cfg(10, Mutation::None)));
    let b = act::json::to_pretty(&run(&cfg(10, Mutation::None)));
    assert_eq!(a, b);
}
