//! Bounded verification of contracts: breadth-first exploration of the
//! states reachable from `∅`, then invariant, constructor postcondition and
//! transition postcondition checks over what was explored.
//!
//! A violation is always witnessed by a trace from `∅` that is shortest
//! among the explored ones. "Holds" means holds within the explored bound.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::entailment::BoundsConfig;
use crate::semantics::serial::{ser_env, ser_state};
use crate::semantics::{self, Addr, Env, EvalError, Interp, Mutation, State, StepLabel, TimedState, Value};
use crate::syntax::Expr;
use crate::typing::{Checked, TypingState};
use crate::valuetyping;

#[derive(Debug, Clone)]
pub struct ExploreConfig {
    pub max_depth: usize,
    pub max_states: usize,
    pub bounds: BoundsConfig,
    /// Deliberately wrong interpreter variants, for testing the checks themselves.
    pub mutation: Mutation,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            max_depth: 4,
            max_states: 100_000,
            bounds: BoundsConfig::default(),
            mutation: Mutation::None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Node {
    pub state: State,
    pub depth: usize,
    /// Node and step this state was first reached by.
    pub parent: Option<(usize, StepLabel)>,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: StepLabel,
    pub ret: Value,
}

/// A step that failed for a reason other than a false precondition.
#[derive(Debug, Clone)]
pub struct StuckStep {
    pub node: usize,
    pub failure: semantics::Failure,
}

#[derive(Debug, Clone)]
pub struct Exploration {
    /// States in BFS order; node 0 is `∅`.
    pub nodes: Vec<Node>,
    /// Edges in BFS order of their source.
    pub edges: Vec<Edge>,
    pub stuck: Vec<StuckStep>,
    /// Nodes whose store failed the well-typedness check, with the reason.
    pub ill_typed: Vec<(usize, String)>,
    pub max_depth: usize,
    pub depth_reached: usize,
    /// Exploration stopped at `max_states` with unexplored successors left.
    pub state_cap_hit: bool,
    /// Exploration stopped at `max_depth` with states left unexpanded.
    pub frontier_left: bool,
}

impl Exploration {
    /// The labels leading from `∅` to `node`.
    pub fn trace(&self, node: usize) -> Vec<StepLabel> {
        let mut out = Vec::new();
        let mut cur = node;
        while let Some((p, label)) = &self.nodes[cur].parent {
            out.push(label.clone());
            cur = *p;
        }
        out.reverse();
        out
    }
}

/// Breadth-first exploration from `∅`, deduplicated by state equality.
pub fn explore(sigma: &TypingState, cfg: &ExploreConfig) -> Exploration {
    let interp = Interp::with_mutation(sigma, cfg.mutation);
    let mut exp = Exploration {
        nodes: vec![Node {
            state: State::empty(),
            depth: 0,
            parent: None,
        }],
        edges: Vec::new(),
        stuck: Vec::new(),
        ill_typed: Vec::new(),
        max_depth: cfg.max_depth,
        depth_reached: 0,
        state_cap_hit: false,
        frontier_left: false,
    };
    let mut index: HashMap<State, usize> = HashMap::new();
    index.insert(State::empty(), 0);
    let mut frontier = vec![0usize];
    let max_states = cfg.max_states.max(1);
    for depth in 0..cfg.max_depth {
        if frontier.is_empty() {
            break;
        }
        let succs: Vec<semantics::Successors> = frontier
            .par_iter()
            .map(|&id| semantics::step(&interp, &exp.nodes[id].state, &cfg.bounds))
            .collect();
        let mut next = Vec::new();
        for (&from, succ) in frontier.iter().zip(succs) {
            for failure in succ.failures {
                exp.stuck.push(StuckStep { node: from, failure });
            }
            for st in succ.steps {
                let to = match index.get(&st.state) {
                    Some(&id) => id,
                    None => {
                        if exp.nodes.len() >= max_states {
                            exp.state_cap_hit = true;
                            continue;
                        }
                        let id = exp.nodes.len();
                        index.insert(st.state.clone(), id);
                        exp.nodes.push(Node {
                            state: st.state,
                            depth: depth + 1,
                            parent: Some((from, st.label.clone())),
                        });
                        next.push(id);
                        id
                    }
                };
                exp.edges.push(Edge {
                    from,
                    to,
                    label: st.label,
                    ret: st.ret,
                });
            }
        }
        let typed: Vec<(usize, String)> = next
            .par_iter()
            .filter_map(|&id| {
                valuetyping::store_well_typed(sigma, &exp.nodes[id].state)
                    .err()
                    .map(|e| (id, e.to_string()))
            })
            .collect();
        exp.ill_typed.extend(typed);
        if !next.is_empty() {
            exp.depth_reached = depth + 1;
        }
        frontier = next;
    }
    // Constructors can always fire, so a non-empty last level means more
    // states lie beyond the depth limit.
    exp.frontier_left = !frontier.is_empty();
    exp
}

/// Evidence for a failed check.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    /// Steps from `∅`; for postconditions the last step is the offending one.
    pub trace: Vec<StepLabel>,
    pub loc: Addr,
    #[serde(serialize_with = "ser_state")]
    pub state: State,
    #[serde(serialize_with = "ser_opt_state", skip_serializing_if = "Option::is_none")]
    pub pre: Option<State>,
    #[serde(serialize_with = "ser_opt_env", skip_serializing_if = "Option::is_none")]
    pub rho: Option<Env>,
}

fn ser_opt_state<S: serde::Serializer>(s: &Option<State>, ser: S) -> Result<S::Ok, S::Error> {
    match s {
        Some(s) => ser_state(s, ser),
        None => ser.serialize_none(),
    }
}

fn ser_opt_env<S: serde::Serializer>(r: &Option<Env>, ser: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_env(r, ser),
        None => ser.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CheckVerdict {
    HoldsWithinBound,
    Violated { witness: Box<Witness> },
    Stuck { witness: Box<Witness>, error: String },
}

impl CheckVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CheckVerdict::HoldsWithinBound)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            CheckVerdict::HoldsWithinBound => None,
            CheckVerdict::Violated { witness } | CheckVerdict::Stuck { witness, .. } => Some(witness),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ItemReport {
    /// `invariant`, `constructor` or the transition name.
    pub entry: String,
    pub index: usize,
    pub expr: String,
    #[serde(flatten)]
    pub verdict: CheckVerdict,
}

fn item(entry: &str, index: usize, e: &Expr, verdict: CheckVerdict) -> ItemReport {
    ItemReport {
        entry: entry.to_string(),
        index,
        expr: e.to_string(),
        verdict,
    }
}

/// E-InvCheck over the explored states: every invariant holds at every
/// location typed at `contract`, under the empty environment.
pub fn check_invariants(
    sigma: &TypingState,
    contract: &str,
    invariants: &[Expr],
    exp: &Exploration,
    mutation: Mutation,
) -> Vec<ItemReport> {
    let interp = Interp::with_mutation(sigma, mutation);
    let mut out: Vec<ItemReport> = invariants
        .iter()
        .enumerate()
        .map(|(i, e)| item("invariant", i, e, CheckVerdict::HoldsWithinBound))
        .collect();
    let empty = Env::new();
    for (id, node) in exp.nodes.iter().enumerate() {
        for (l, inst) in node.state.iter() {
            if inst.contract != contract || valuetyping::location_has_contract(sigma, &node.state, l, contract).is_err() {
                continue;
            }
            for (i, inv) in invariants.iter().enumerate() {
                if !out[i].verdict.holds() {
                    continue;
                }
                let witness = || {
                    Box::new(Witness {
                        trace: exp.trace(id),
                        loc: l,
                        state: node.state.clone(),
                        pre: None,
                        rho: None,
                    })
                };
                match interp.eval_bool(&node.state, &empty, Some(l), inv) {
                    Ok(true) => {}
                    Ok(false) => out[i].verdict = CheckVerdict::Violated { witness: witness() },
                    Err(e) => {
                        out[i].verdict = CheckVerdict::Stuck {
                            witness: witness(),
                            error: e.to_string(),
                        }
                    }
                }
            }
        }
    }
    out
}

/// E-CtorPostCheck: every explored constructor step of `contract` satisfies
/// its postconditions on the resulting state.
pub fn check_ctor_post(sigma: &TypingState, contract: &str, exp: &Exploration, mutation: Mutation) -> Vec<ItemReport> {
    let interp = Interp::with_mutation(sigma, mutation);
    let ctor = match sigma.constructor(contract) {
        Some(c) => c,
        None => return Vec::new(),
    };
    let mut out: Vec<ItemReport> = ctor
        .ensures
        .iter()
        .enumerate()
        .map(|(i, e)| item("constructor", i, e, CheckVerdict::HoldsWithinBound))
        .collect();
    for edge in exp.edges.iter() {
        if edge.label.contract != contract || edge.label.transition.is_some() {
            continue;
        }
        let s2 = &exp.nodes[edge.to].state;
        for (i, post) in ctor.ensures.iter().enumerate() {
            if !out[i].verdict.holds() {
                continue;
            }
            let witness = || {
                let mut trace = exp.trace(edge.from);
                trace.push(edge.label.clone());
                Box::new(Witness {
                    trace,
                    loc: edge.label.loc,
                    state: s2.clone(),
                    pre: Some(exp.nodes[edge.from].state.clone()),
                    rho: Some(edge.label.rho.clone()),
                })
            };
            match interp.eval_bool(s2, &edge.label.rho, Some(edge.label.loc), post) {
                Ok(true) => {}
                Ok(false) => out[i].verdict = CheckVerdict::Violated { witness: witness() },
                Err(e) => {
                    out[i].verdict = CheckVerdict::Stuck {
                        witness: witness(),
                        error: e.to_string(),
                    }
                }
            }
        }
    }
    out
}

/// E-TransPostCheck: every explored transition step of `contract` satisfies
/// its postconditions over the (pre, post) pair.
pub fn check_trans_post(sigma: &TypingState, contract: &str, exp: &Exploration, mutation: Mutation) -> Vec<ItemReport> {
    let interp = Interp::with_mutation(sigma, mutation);
    let transitions = sigma.transitions(contract);
    let mut out = Vec::new();
    let mut offset = HashMap::new();
    for t in transitions {
        offset.insert(t.name.clone(), out.len());
        for (i, e) in t.ensures.iter().enumerate() {
            out.push(item(&t.name, i, e, CheckVerdict::HoldsWithinBound));
        }
    }
    for edge in exp.edges.iter() {
        let name = match &edge.label.transition {
            Some(n) if edge.label.contract == contract => n,
            _ => continue,
        };
        let t = match sigma.transition(contract, name) {
            Some(t) => t,
            None => continue,
        };
        let base = offset[name];
        let s = &exp.nodes[edge.from].state;
        let s2 = &exp.nodes[edge.to].state;
        for (i, post) in t.ensures.iter().enumerate() {
            if !out[base + i].verdict.holds() {
                continue;
            }
            let witness = || {
                let mut trace = exp.trace(edge.from);
                trace.push(edge.label.clone());
                Box::new(Witness {
                    trace,
                    loc: edge.label.loc,
                    state: s2.clone(),
                    pre: Some(s.clone()),
                    rho: Some(edge.label.rho.clone()),
                })
            };
            match interp.eval_expr(TimedState::T(s, s2), &edge.label.rho, Some(edge.label.loc), post) {
                Ok(Value::Bool(true)) => {}
                Ok(_) => out[base + i].verdict = CheckVerdict::Violated { witness: witness() },
                Err(e) => {
                    out[base + i].verdict = CheckVerdict::Stuck {
                        witness: witness(),
                        error: e.to_string(),
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractReport {
    pub contract: String,
    pub holds: bool,
    pub invariants: Vec<ItemReport>,
    #[serde(rename = "ctorPost")]
    pub ctor_post: Vec<ItemReport>,
    #[serde(rename = "transPost")]
    pub trans_post: Vec<ItemReport>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Bound {
    pub max_depth: usize,
    pub max_states: usize,
    pub depth_reached: usize,
    pub states: usize,
    pub edges: usize,
    /// Successors were cut off by the depth or state limit.
    pub truncated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StuckReport {
    pub entry: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loc: Option<Addr>,
    pub error: String,
    pub kind: &'static str,
    pub trace: Vec<StepLabel>,
    #[serde(serialize_with = "ser_env")]
    pub rho: Env,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub bound: Bound,
    pub holds: bool,
    pub contracts: Vec<ContractReport>,
    /// Reachable steps that got stuck although their preconditions held.
    pub stuck: Vec<StuckReport>,
    /// Explored states with an ill-typed store; always empty for a sound checker.
    pub ill_typed_states: Vec<String>,
}

/// E-Contract for every contract of a checked spec over one shared exploration.
pub fn verify(checked: &Checked, cfg: &ExploreConfig) -> Report {
    let exp = explore(&checked.sigma, cfg);
    report(checked, &exp, cfg)
}

pub fn report(checked: &Checked, exp: &Exploration, cfg: &ExploreConfig) -> Report {
    let sigma = &checked.sigma;
    let contracts: Vec<ContractReport> = checked
        .spec
        .contracts
        .iter()
        .map(|contract| {
            let c = contract.name.as_str();
            let invariants = check_invariants(sigma, c, &contract.invariants, exp, cfg.mutation);
            let ctor_post = check_ctor_post(sigma, c, exp, cfg.mutation);
            let trans_post = check_trans_post(sigma, c, exp, cfg.mutation);
            let holds = invariants
                .iter()
                .chain(&ctor_post)
                .chain(&trans_post)
                .all(|i| i.verdict.holds());
            ContractReport {
                contract: c.to_string(),
                holds,
                invariants,
                ctor_post,
                trans_post,
            }
        })
        .collect();
    let stuck: Vec<StuckReport> = exp
        .stuck
        .iter()
        .filter(|s| s.failure.error.is_type_safety_violation())
        .map(|s| StuckReport {
            entry: match &s.failure.transition {
                None => format!("{}.constructor", s.failure.contract),
                Some(t) => format!("{}.{}", s.failure.contract, t),
            },
            loc: s.failure.loc,
            error: s.failure.error.to_string(),
            kind: s.failure.error.kind(),
            trace: exp.trace(s.node),
            rho: s.failure.rho.clone(),
        })
        .collect();
    let ill_typed_states: Vec<String> = exp
        .ill_typed
        .iter()
        .map(|(id, msg)| format!("state {} (depth {}): {}", id, exp.nodes[*id].depth, msg))
        .collect();
    let holds = contracts.iter().all(|c| c.holds) && stuck.is_empty() && ill_typed_states.is_empty();
    Report {
        schema_version: crate::json::SCHEMA_VERSION,
        bound: Bound {
            max_depth: exp.max_depth,
            max_states: cfg.max_states,
            depth_reached: exp.depth_reached,
            states: exp.nodes.len(),
            edges: exp.edges.len(),
            truncated: exp.state_cap_hit || exp.frontier_left,
        },
        holds,
        contracts,
        stuck,
        ill_typed_states,
    }
}

/// Replays a trace from `∅`, returning the final state.
pub fn replay(sigma: &TypingState, trace: &[StepLabel], mutation: Mutation) -> Result<State, EvalError> {
    let interp = Interp::with_mutation(sigma, mutation);
    let mut s = State::empty();
    for label in trace {
        s = semantics::apply(&interp, &s, label)?.1;
    }
    Ok(s)
}

impl Report {
    /// Plain-text rendering for terminals.
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let b = &self.bound;
        let _ = writeln!(
            out,
            "bound: {} (depth {} of {}, {} states, {} steps{})",
            b.max_depth,
            b.depth_reached,
            b.max_depth,
            b.states,
            b.edges,
            if b.truncated { ", truncated" } else { ", exhaustive" }
        );
        for c in &self.contracts {
            let _ = writeln!(out, "{}: {}", c.contract, if c.holds { "holds within bound" } else { "VIOLATED" });
            for (kind, items) in [("invariant", &c.invariants), ("ensures", &c.ctor_post), ("ensures", &c.trans_post)] {
                for i in items.iter() {
                    let what = if kind == "invariant" {
                        format!("invariant {}", i.expr)
                    } else {
                        format!("{} ensures {}", i.entry, i.expr)
                    };
                    match &i.verdict {
                        CheckVerdict::HoldsWithinBound => {
                            let _ = writeln!(out, "  ok    {}", what);
                        }
                        CheckVerdict::Violated { witness } => {
                            let _ = writeln!(out, "  FAIL  {}", what);
                            render_trace(&mut out, &witness.trace);
                        }
                        CheckVerdict::Stuck { witness, error } => {
                            let _ = writeln!(out, "  STUCK {}: {}", what, error);
                            render_trace(&mut out, &witness.trace);
                        }
                    }
                }
            }
        }
        for s in &self.stuck {
            let _ = writeln!(out, "stuck: {}: {}", s.entry, s.error);
            render_trace(&mut out, &s.trace);
        }
        for s in &self.ill_typed_states {
            let _ = writeln!(out, "ill-typed {}", s);
        }
        out
    }
}

fn render_trace(out: &mut String, trace: &[StepLabel]) {
    for (i, l) in trace.iter().enumerate() {
        let _ = writeln!(out, "        {}. {}", i + 1, l);
    }
}
