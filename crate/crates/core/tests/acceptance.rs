//! Acceptance gate: one pass/fail line per criterion, with the thresholds
//! and time limits pinned below.

mod common;

use std::time::{Duration, Instant};

use act::entailment::{discharge, replay, BoundsConfig, Verdict};
use act::metatheory::{self, MetaConfig, MetaReport};
use act::parser::parse_spec;
use act::semantics::Mutation;
use act::syntax::pretty::spec_to_string;
use act::typing::TypingState;
use act::valuetyping::store_well_typed;
use act::verifier::{explore, verify, ExploreConfig};
use act::wellfounded::{build_prec, check_wf, ContractGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const RULE_CASES_MIN: usize = 40;
const RULE_LIMIT: Duration = Duration::from_secs(1);
const DETERMINISM_MIN: u64 = 1000;
const DETERMINISM_LIMIT: Duration = Duration::from_secs(60);
const CATEGORIES: [&str; 8] = ["expr", "ref", "mapping", "slot", "creates", "updates", "ctor", "trans"];
const SAFETY_TRANSITIONS_MIN: u64 = 500;
const SAFETY_LIMIT: Duration = Duration::from_secs(120);
const META_CASES: usize = 200;
const COUNTER_DEPTH: usize = 12;
const COUNTER_STATES_MAX: usize = 10_000;
const COUNTER_LIMIT: Duration = Duration::from_secs(60);
const WF_LIMIT: Duration = Duration::from_secs(1);
const BOOL_OBLIGATIONS: u64 = 200;
const BOOL_LIMIT: Duration = Duration::from_secs(30);
const SWAP_DEPTH: usize = 3;

struct Line {
    n: u8,
    ok: bool,
    detail: String,
}

fn line(n: u8, ok: bool, detail: String) -> Line {
    println!("criterion {}: {} {}", n, if ok { "PASS" } else { "FAIL" }, detail);
    Line { n, ok, detail }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn rules() -> Line {
    let (res, dt) = timed(|| {
        let cases = common::rule_cases();
        let failed: Vec<String> = cases
            .iter()
            .filter_map(|c| (c.run)().err().map(|e| format!("{} ({}): {}", c.rule, c.what, e)))
            .collect();
        (cases.len(), failed)
    });
    let (n, failed) = res;
    line(
        1,
        n >= RULE_CASES_MIN && failed.is_empty() && dt < RULE_LIMIT,
        format!("{} rule cases, {} failed, {:?} (limit {:?}) {}", n, failed.len(), dt, RULE_LIMIT, failed.join("; ")),
    )
}

fn determinism(r: &MetaReport, dt: Duration) -> Line {
    let mut ok = dt < DETERMINISM_LIMIT;
    let mut parts = Vec::new();
    for cat in CATEGORIES {
        let c = r.stats.determinism.get(cat).cloned().unwrap_or_default();
        ok &= c.checked >= DETERMINISM_MIN && c.failed == 0;
        parts.push(format!("{}={}/{}", cat, c.checked - c.failed, c.checked));
    }
    line(
        2,
        ok,
        format!("{} (min {} each), {:?} (limit {:?})", parts.join(" "), DETERMINISM_MIN, dt, DETERMINISM_LIMIT),
    )
}

fn type_safety(r: &MetaReport, dt: Duration) -> Line {
    let s = &r.stats;
    let ok = s.progress_transitions >= SAFETY_TRANSITIONS_MIN
        && s.progress.failed == 0
        && s.preservation.failed == 0
        && s.frame.failed == 0
        && dt < SAFETY_LIMIT;
    line(
        3,
        ok,
        format!(
            "{} transitions (min {}), progress {}/{} failed, preservation {}/{} failed, frame {}/{} failed, {:?} (limit {:?})",
            s.progress_transitions,
            SAFETY_TRANSITIONS_MIN,
            s.progress.failed,
            s.progress.checked,
            s.preservation.failed,
            s.preservation.checked,
            s.frame.failed,
            s.frame.checked,
            dt,
            SAFETY_LIMIT
        ),
    )
}

fn counter() -> Line {
    let c = common::checked("counter");
    let cfg = ExploreConfig {
        max_depth: COUNTER_DEPTH,
        max_states: COUNTER_STATES_MAX,
        ..ExploreConfig::default()
    };
    let (exp, dt) = timed(|| explore(&c.sigma, &cfg));
    let untyped = exp
        .nodes
        .iter()
        .filter(|n| store_well_typed(&c.sigma, &n.state).is_err())
        .count();
    let ok = exp.depth_reached == COUNTER_DEPTH
        && exp.nodes.len() <= COUNTER_STATES_MAX
        && untyped == 0
        && exp.ill_typed.is_empty()
        && exp.stuck.is_empty()
        && dt < COUNTER_LIMIT;
    line(
        4,
        ok,
        format!(
            "depth {} reached, {} states (max {}), {} ill-typed, {:?} (limit {:?})",
            exp.depth_reached,
            exp.nodes.len(),
            COUNTER_STATES_MAX,
            untyped,
            dt,
            COUNTER_LIMIT
        ),
    )
}

fn well_founded() -> Line {
    let ((accepted, bad, witness), dt) = timed(|| {
        let mut accepted = 0;
        let mut bad = Vec::new();
        for (name, src) in common::corpus() {
            let Ok(c) = common::check(&src) else { continue };
            accepted += 1;
            if check_wf(&build_prec(&c.sigma)).is_err() {
                bad.push(name);
            }
        }
        let cyclic = ContractGraph::from_edges([("A", "B"), ("B", "C"), ("C", "A")]);
        (accepted, bad, check_wf(&cyclic).err())
    });
    let ok = bad.is_empty() && witness.as_ref().is_some_and(|w| w.cycle.len() == 3) && dt < WF_LIMIT;
    let w = witness.map(|w| w.to_string()).unwrap_or_else(|| "no witness".into());
    line(
        5,
        ok,
        format!("{} accepted specs well founded, {} not; cyclic graph: {}; {:?} (limit {:?})", accepted - bad.len(), bad.len(), w, dt, WF_LIMIT),
    )
}

fn bool_obligations() -> Line {
    let sigma = TypingState::new();
    let cfg = BoundsConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ((agree, refuted), dt) = timed(|| {
        let (mut agree, mut refuted) = (0u64, 0u64);
        for _ in 0..BOOL_OBLIGATIONS {
            let ob = common::bool_obligation(&mut rng);
            let oracle = common::truth_table_valid(&ob);
            let same = match discharge(&sigma, &ob, &cfg) {
                Verdict::ValidWithinBounds { .. } => oracle,
                Verdict::Counterexample(c) => {
                    refuted += 1;
                    !oracle && replay(&sigma, &ob, &c) == Ok(true)
                }
                Verdict::Unknown { .. } => false,
            };
            agree += same as u64;
        }
        (agree, refuted)
    });
    line(
        6,
        agree == BOOL_OBLIGATIONS && dt < BOOL_LIMIT,
        format!("{}/{} agree with truth tables ({} refuted), {:?} (limit {:?})", agree, BOOL_OBLIGATIONS, refuted, dt, BOOL_LIMIT),
    )
}

fn swap() -> Line {
    let c = common::checked("swap");
    let cfg = ExploreConfig {
        max_depth: SWAP_DEPTH,
        ..ExploreConfig::default()
    };
    let good = verify(&c, &cfg);
    let bad = verify(
        &c,
        &ExploreConfig {
            mutation: Mutation::SequentialUpdates,
            ..cfg.clone()
        },
    );
    line(
        7,
        good.holds && !bad.holds,
        format!(
            "depth {}: holds {}, with sequential updates holds {}",
            SWAP_DEPTH, good.holds, bad.holds
        ),
    )
}

fn reproducibility() -> Line {
    let mut mismatched = Vec::new();
    let corpus = common::corpus();
    for (name, src) in &corpus {
        let same = parse_spec(src)
            .ok()
            .and_then(|s| parse_spec(&spec_to_string(&s)).ok().map(|t| s == t))
            .unwrap_or(false);
        if !same {
            mismatched.push(name.clone());
        }
    }
    let meta = MetaConfig {
        seed: 8,
        cases: 10,
        ..MetaConfig::default()
    };
    let m1 = act::json::to_pretty(&metatheory::run(&meta));
    let m2 = act::json::to_pretty(&metatheory::run(&meta));
    let c = common::checked("erc20-ish");
    let cfg = ExploreConfig {
        max_depth: 2,
        ..ExploreConfig::default()
    };
    let v1 = act::json::to_pretty(&verify(&c, &cfg));
    let v2 = act::json::to_pretty(&verify(&c, &cfg));
    let ok = mismatched.is_empty() && m1 == m2 && v1 == v2;
    line(
        8,
        ok,
        format!(
            "{}/{} corpus specs round-trip {:?}, metatheory JSON identical {}, verify JSON identical {}",
            corpus.len() - mismatched.len(),
            corpus.len(),
            mismatched,
            m1 == m2,
            v1 == v2
        ),
    )
}

fn main() {
    let mut lines = vec![rules()];
    let cfg = MetaConfig {
        cases: META_CASES,
        ..MetaConfig::default()
    };
    let (report, dt) = timed(|| metatheory::run(&cfg));
    lines.push(determinism(&report, dt));
    lines.push(type_safety(&report, dt));
    lines.push(counter());
    lines.push(well_founded());
    lines.push(bool_obligations());
    lines.push(swap());
    lines.push(reproducibility());
    let failed: Vec<&Line> = lines.iter().filter(|l| !l.ok).collect();
    println!("acceptance: {}/{} criteria pass", lines.len() - failed.len(), lines.len());
    if !failed.is_empty() {
        for l in failed {
            eprintln!("criterion {} failed: {}", l.n, l.detail);
        }
        std::process::exit(1);
    }
}
