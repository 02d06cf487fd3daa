//! Executable metatheory: determinism, frame, preservation and progress
//! checked on generated well-typed specs, states and environments.
//!
//! Every case is derived from `(seed, case index)`, so a run is fully
//! reproducible. The first failing instance is shrunk and reported with the
//! spec source, the trace that builds its state and the environment.

pub mod gen;
mod props;
mod shrink;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::entailment;
use crate::semantics::{Addr, Env, Mutation, StepLabel};
use crate::syntax::{pretty, Spec};
use crate::typing::{self, Checked};
pub use gen::{GenConfig, GenRng};
pub use props::{Category, Prepared};

#[derive(Debug, Clone)]
pub struct MetaConfig {
    pub seed: u64,
    /// Number of generated specs.
    pub cases: usize,
    pub mutation: Mutation,
    pub gen: GenConfig,
    pub states_per_spec: usize,
    pub walk_len: usize,
    pub entries_per_state: usize,
    pub shrink_budget: usize,
}

impl Default for MetaConfig {
    fn default() -> Self {
        MetaConfig {
            seed: 42,
            cases: 100,
            mutation: Mutation::None,
            gen: GenConfig::default(),
            states_per_spec: 6,
            walk_len: 5,
            entries_per_state: 8,
            shrink_budget: 400,
        }
    }
}

/// The entry point an instance exercises.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub contract: String,
    /// `None` for the constructor.
    pub transition: Option<String>,
    /// Target location, for transitions.
    pub loc: Option<Addr>,
}

impl std::fmt::Display for Entry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.transition, self.loc) {
            (Some(t), Some(l)) => write!(f, "{}.{} at {}", self.contract, t, l),
            (Some(t), None) => write!(f, "{}.{}", self.contract, t),
            (None, _) => write!(f, "{}.constructor", self.contract),
        }
    }
}

/// One generated test input: a spec, the steps building the state, an
/// entry point and its environment.
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: Spec,
    pub trace: Vec<StepLabel>,
    pub entry: Entry,
    pub rho: Env,
    /// Seed of the table permutation used by the determinism checks.
    pub perm_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub property: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Counts {
    pub checked: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    /// Determinism checks per term category.
    pub determinism: BTreeMap<String, Counts>,
    pub frame: Counts,
    pub preservation: Counts,
    /// Entry evaluations whose precondition held in a spec with valid obligations.
    pub progress: Counts,
    /// Transitions (by spec and name) that took part in a progress check.
    pub progress_transitions: u64,
    pub case_selection: Counts,
    pub two_phase_updates: Counts,
}

impl Stats {
    fn merge(&mut self, o: &Stats) {
        for (k, c) in &o.determinism {
            let e = self.determinism.entry(k.clone()).or_default();
            e.checked += c.checked;
            e.failed += c.failed;
        }
        for (a, b) in [
            (&mut self.frame, &o.frame),
            (&mut self.preservation, &o.preservation),
            (&mut self.progress, &o.progress),
            (&mut self.case_selection, &o.case_selection),
            (&mut self.two_phase_updates, &o.two_phase_updates),
        ] {
            a.checked += b.checked;
            a.failed += b.failed;
        }
        self.progress_transitions += o.progress_transitions;
    }

    pub fn total_failed(&self) -> u64 {
        self.determinism.values().map(|c| c.failed).sum::<u64>()
            + self.frame.failed
            + self.preservation.failed
            + self.progress.failed
            + self.case_selection.failed
            + self.two_phase_updates.failed
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Reproducer {
    pub case: usize,
    pub property: String,
    pub message: String,
    pub spec: String,
    pub trace: Vec<StepLabel>,
    pub entry: Entry,
    #[serde(serialize_with = "crate::semantics::serial::ser_env")]
    pub rho: Env,
    pub shrink_steps: usize,
}

impl Reproducer {
    pub fn render(&self) -> String {
        let mut out = format!(
            "property `{}` failed in case {}: {}\n\nspec:\n{}\n",
            self.property, self.case, self.message, self.spec
        );
        out.push_str("state built by:\n");
        if self.trace.is_empty() {
            out.push_str("  (empty state)\n");
        }
        for (i, l) in self.trace.iter().enumerate() {
            out.push_str(&format!("  {}. {}\n", i + 1, l));
        }
        let rho: Vec<String> = self.rho.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
        out.push_str(&format!("entry: {} with {}\n", self.entry, rho.join(", ")));
        out.push_str(&format!("(shrunk in {} steps)\n", self.shrink_steps));
        out
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MetaReport {
    pub schema_version: u32,
    pub seed: u64,
    pub cases: usize,
    pub mutation: String,
    pub specs_accepted: usize,
    pub specs_rejected: usize,
    /// Accepted specs whose obligations all hold within bounds.
    pub specs_with_valid_obligations: usize,
    pub instances: u64,
    pub stats: Stats,
    pub passed: bool,
    pub failure: Option<Reproducer>,
}

impl MetaReport {
    pub fn render_human(&self) -> String {
        let mut out = format!(
            "metatheory: seed {}, {} cases, mutation {}\n  specs: {} accepted, {} rejected by typing, {} with valid obligations\n  instances: {}\n",
            self.seed,
            self.cases,
            self.mutation,
            self.specs_accepted,
            self.specs_rejected,
            self.specs_with_valid_obligations,
            self.instances
        );
        let line = |name: &str, c: &Counts| format!("  {:<28} {:>8} checked {:>4} failed\n", name, c.checked, c.failed);
        for (k, c) in &self.stats.determinism {
            out.push_str(&line(&format!("determinism/{}", k), c));
        }
        out.push_str(&line("frame", &self.stats.frame));
        out.push_str(&line("preservation", &self.stats.preservation));
        out.push_str(&line("progress", &self.stats.progress));
        out.push_str(&line("case-selection", &self.stats.case_selection));
        out.push_str(&line("two-phase-updates", &self.stats.two_phase_updates));
        out.push_str(&format!(
            "  transitions in progress checks: {}\n",
            self.stats.progress_transitions
        ));
        match &self.failure {
            None => out.push_str(if self.passed { "PASS\n" } else { "FAIL\n" }),
            Some(r) => {
                out.push_str("FAIL\n\n");
                out.push_str(&r.render());
            }
        }
        out
    }
}

struct CaseResult {
    accepted: bool,
    valid_obligations: bool,
    instances: u64,
    stats: Stats,
    failure: Option<(Instance, Violation)>,
}

/// Whether every obligation of a checked spec holds within the default bounds.
pub fn obligations_hold(checked: &Checked) -> bool {
    let cfg = gen::obligation_bounds();
    entailment::discharge_all(&checked.sigma, &checked.obligations, &cfg)
        .iter()
        .all(|v| v.is_valid())
}

fn run_case(cfg: &MetaConfig, index: usize, case_seed: u64) -> CaseResult {
    let mut rng = GenRng::seed_from_u64(case_seed);
    let spec = gen::gen_spec(&mut rng, &cfg.gen);
    let mut out = CaseResult {
        accepted: false,
        valid_obligations: false,
        instances: 0,
        stats: Stats::default(),
        failure: None,
    };
    let Ok(checked) = typing::check_spec(&spec) else { return out };
    out.accepted = true;
    let valid = obligations_hold(&checked);
    out.valid_obligations = valid;
    let prepared = Prepared::new(spec, checked, valid, cfg.mutation);
    let interp = prepared.interp();
    let mut seen_transitions = std::collections::BTreeSet::new();
    for _ in 0..cfg.states_per_spec {
        let steps = rng.gen_range(0..=cfg.walk_len);
        let (state, trace) = gen::gen_walk(&mut rng, &interp, steps);
        for _ in 0..cfg.entries_per_state {
            let Some(label) = gen::gen_label(&mut rng, &prepared.checked.sigma, &state) else { continue };
            let entry = Entry {
                contract: label.contract.clone(),
                loc: label.transition.as_ref().map(|_| label.loc),
                transition: label.transition.clone(),
            };
            let inst = Instance {
                spec: prepared.spec.clone(),
                trace: trace.clone(),
                entry,
                rho: label.rho,
                perm_seed: rng.gen(),
            };
            let mut stats = Stats::default();
            let result = props::check(&prepared, &inst, &mut stats);
            out.instances += 1;
            if stats.progress.checked > 0 {
                if let Some(t) = &inst.entry.transition {
                    seen_transitions.insert(format!("{}.{}", inst.entry.contract, t));
                }
            }
            out.stats.merge(&stats);
            if let Err(v) = result {
                out.failure = Some((inst, v));
                out.stats.progress_transitions = seen_transitions.len() as u64;
                let _ = index;
                return out;
            }
        }
    }
    out.stats.progress_transitions = seen_transitions.len() as u64;
    out
}

/// Runs all suites on `cfg.cases` generated specs.
pub fn run(cfg: &MetaConfig) -> MetaReport {
    let mut rng = GenRng::seed_from_u64(cfg.seed);
    let seeds: Vec<u64> = (0..cfg.cases).map(|_| rng.gen()).collect();
    let results: Vec<CaseResult> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, s)| run_case(cfg, i, *s))
        .collect();
    let mut report = MetaReport {
        schema_version: crate::json::SCHEMA_VERSION,
        seed: cfg.seed,
        cases: cfg.cases,
        mutation: cfg.mutation.name().to_string(),
        specs_accepted: 0,
        specs_rejected: 0,
        specs_with_valid_obligations: 0,
        instances: 0,
        stats: Stats::default(),
        passed: true,
        failure: None,
    };
    let mut first_failure = None;
    for (i, r) in results.into_iter().enumerate() {
        if r.accepted {
            report.specs_accepted += 1;
        } else {
            report.specs_rejected += 1;
        }
        if r.valid_obligations {
            report.specs_with_valid_obligations += 1;
        }
        report.instances += r.instances;
        report.stats.merge(&r.stats);
        if first_failure.is_none() {
            if let Some(f) = r.failure {
                first_failure = Some((i, f));
            }
        }
    }
    if let Some((case, (inst, violation))) = first_failure {
        report.passed = false;
        let (inst, violation, steps) = shrink::shrink(inst, violation, cfg.mutation, cfg.shrink_budget);
        report.failure = Some(Reproducer {
            case,
            property: violation.property,
            message: violation.message,
            spec: pretty::spec_to_string(&inst.spec),
            trace: inst.trace,
            entry: inst.entry,
            rho: inst.rho,
            shrink_steps: steps,
        });
    }
    report
}
