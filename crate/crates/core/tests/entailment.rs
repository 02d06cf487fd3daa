//! Bounded entailment against oracles: truth tables for boolean
//! interfaces, replay for counterexamples, and context counts.

mod common;

use act::entailment::{discharge, discharge_all, enumerate_contexts, replay, BoundsConfig, Verdict};
use act::syntax::{AbiType, BaseType, Param};
use act::typing::TypingState;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bool_obligations_agree_with_truth_tables(seed in any::<u64>()) {
        let ob = common::bool_obligation(&mut ChaCha8Rng::seed_from_u64(seed));
        let sigma = TypingState::new();
        let v = discharge(&sigma, &ob, &BoundsConfig::default());
        let oracle = common::truth_table_valid(&ob);
        match &v {
            Verdict::ValidWithinBounds { .. } => prop_assert!(oracle, "{} judged valid", ob.summary()),
            Verdict::Counterexample(c) => {
                prop_assert!(!oracle, "{} refuted", ob.summary());
                prop_assert_eq!(replay(&sigma, &ob, c), Ok(true));
            }
            Verdict::Unknown { reason } => prop_assert!(false, "unknown: {}", reason),
        }
    }
}

#[test]
fn corpus_counterexamples_replay() {
    let cfg = BoundsConfig::default();
    let mut seen = 0;
    for (name, src) in common::corpus() {
        let Ok(c) = common::check(&src) else { continue };
        for (ob, v) in c.obligations.iter().zip(discharge_all(&c.sigma, &c.obligations, &cfg)) {
            if let Verdict::Counterexample(cex) = v {
                seen += 1;
                assert_eq!(replay(&c.sigma, ob, &cex), Ok(true), "{}: {}", name, ob.summary());
            }
        }
    }
    assert!(seen >= 1);
}

#[test]
fn larger_bounds_keep_counterexamples() {
    let small = BoundsConfig::default();
    let large = BoundsConfig {
        addr_domain: 5,
        extra_int_samples: vec![7.into(), 42.into(), 1000.into()],
        map_footprint: 3,
        ..BoundsConfig::default()
    };
    for (_, src) in common::corpus() {
        let Ok(c) = common::check(&src) else { continue };
        let a = discharge_all(&c.sigma, &c.obligations, &small);
        let b = discharge_all(&c.sigma, &c.obligations, &large);
        for ((ob, x), y) in c.obligations.iter().zip(&a).zip(&b) {
            if matches!(x, Verdict::Counterexample(_)) {
                assert!(matches!(y, Verdict::Counterexample(_)), "{} lost its counterexample", ob.summary());
            }
        }
    }
}

#[test]
fn the_obligation_example_is_refuted_at_five() {
    let c = common::checked("obligation-cex");
    let verdicts = discharge_all(&c.sigma, &c.obligations, &BoundsConfig::default());
    let cex = verdicts
        .iter()
        .find_map(|v| match v {
            Verdict::Counterexample(c) => Some(c),
            _ => None,
        })
        .expect("a counterexample");
    assert_eq!(cex.describe(), "x = 5");
}

#[test]
fn context_counts_follow_the_sample_sets() {
    let sigma = TypingState::new();
    let cfg = BoundsConfig::default();
    // caller and origin range over 3 addresses, callvalue over 4 uint256 samples.
    let n = enumerate_contexts(&sigma, &[], None, &cfg, &mut |_| true).unwrap();
    assert_eq!(n, 36);
    let b = Param {
        name: "b".into(),
        ty: AbiType::Base(BaseType::Bool),
        span: Default::default(),
    };
    let n = enumerate_contexts(&sigma, &[b], None, &cfg, &mut |_| true).unwrap();
    assert_eq!(n, 72);
}
