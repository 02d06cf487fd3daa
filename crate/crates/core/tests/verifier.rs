//! Exploration, invariant and postcondition checks over the corpus.

mod common;

use act::entailment::BoundsConfig;
use act::semantics::{step, Interp, Mutation, State};
use act::valuetyping::store_well_typed;
use act::verifier::{explore, replay, verify, CheckVerdict, ExploreConfig};

fn cfg(depth: usize) -> ExploreConfig {
    ExploreConfig {
        max_depth: depth,
        ..ExploreConfig::default()
    }
}

#[test]
fn counter_depth_12_every_state_is_well_typed() {
    let c = common::checked("counter");
    let exp = explore(&c.sigma, &cfg(12));
    assert!(exp.nodes.len() <= 10_000);
    assert_eq!(exp.nodes.len(), 4095);
    assert!(exp.ill_typed.is_empty());
    for n in &exp.nodes {
        store_well_typed(&c.sigma, &n.state).unwrap();
    }
    assert!(verify(&c, &cfg(12)).holds);
}

#[test]
fn broken_invariant_has_a_two_step_witness() {
    let c = common::checked("broken-invariant");
    let report = verify(&c, &cfg(4));
    assert!(!report.holds);
    let inv = &report.contracts[0].invariants[0];
    let w = match &inv.verdict {
        CheckVerdict::Violated { witness } => witness,
        other => panic!("expected a violation, got {:?}", other),
    };
    let entries: Vec<String> = w.trace.iter().map(|l| l.entry()).collect();
    assert_eq!(entries, ["Counter.constructor", "Counter.incr"]);
    let s = replay(&c.sigma, &w.trace, Mutation::None).unwrap();
    assert_eq!(s, w.state);
    let interp = Interp::new(&c.sigma);
    let holds = interp
        .eval_bool(&s, &Default::default(), Some(w.loc), &c.spec.contracts[0].invariants[0])
        .unwrap();
    assert!(!holds);
}

#[test]
fn broken_post_is_reported_on_the_offending_step() {
    let c = common::checked("broken-post");
    let report = verify(&c, &cfg(3));
    assert!(!report.holds);
    let item = &report.contracts[0].trans_post[0];
    let w = item.verdict.witness().expect("witness");
    assert_eq!(w.trace.last().unwrap().entry(), "Counter.incr");
    let pre = replay(&c.sigma, &w.trace[..w.trace.len() - 1], Mutation::None).unwrap();
    assert_eq!(Some(&pre), w.pre.as_ref());
}

#[test]
fn swap_holds_and_sequential_updates_break_it() {
    let c = common::checked("swap");
    assert!(verify(&c, &cfg(3)).holds);
    let wrong = ExploreConfig {
        mutation: Mutation::SequentialUpdates,
        ..cfg(3)
    };
    let report = verify(&c, &wrong);
    assert!(!report.holds);
    let failed: Vec<&str> = report.contracts[0]
        .trans_post
        .iter()
        .filter(|i| !i.verdict.holds())
        .map(|i| i.expr.as_str())
        .collect();
    assert!(!failed.is_empty());
}

#[test]
fn depth_zero_is_vacuous() {
    let c = common::checked("counter");
    let report = verify(&c, &cfg(0));
    assert!(report.holds);
    assert_eq!(report.bound.states, 1);
    assert!(report.render_human().starts_with("bound: 0"));
}

#[test]
fn corpus_explores_without_stuck_steps() {
    for (name, src) in common::corpus() {
        let Ok(c) = common::check(&src) else { continue };
        let report = verify(&c, &cfg(2));
        assert!(report.stuck.is_empty(), "{}: {:?}", name, report.stuck);
        assert!(report.ill_typed_states.is_empty(), "{}: {:?}", name, report.ill_typed_states);
    }
}

#[test]
fn mapping_heavy_duplicate_key_is_found() {
    let c = common::checked("mapping-heavy");
    let report = verify(&c, &cfg(2));
    assert!(!report.holds);
}

#[test]
fn every_explored_node_replays_from_its_trace() {
    let c = common::checked("two-contract");
    let exp = explore(&c.sigma, &cfg(3));
    for (i, n) in exp.nodes.iter().enumerate() {
        let s = replay(&c.sigma, &exp.trace(i), Mutation::None).unwrap();
        assert_eq!(s, n.state, "node {}", i);
    }
}

#[test]
fn bool_constructor_has_two_successors() {
    let c = common::check(
        "contract Flag {\n  constructor(b: bool)\n    creates\n      bool on := b\n      uint256 balance := 0\n}\n",
    )
    .unwrap();
    let succ = step(&Interp::new(&c.sigma), &State::empty(), &BoundsConfig::default());
    assert_eq!(succ.steps.len(), 2);
    assert!(succ.failures.is_empty());
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let c = common::checked("erc20-ish");
    let a = act::json::to_pretty(&verify(&c, &cfg(2)));
    let b = act::json::to_pretty(&verify(&c, &cfg(2)));
    assert_eq!(a, b);
}
