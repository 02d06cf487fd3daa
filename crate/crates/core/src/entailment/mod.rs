//! Entailment `Σ; I; Φ ⊨_{A?} ē` and its `new` variant, decided by
//! enumerating well-typed contexts within finite bounds.
//!
//! A counterexample is always genuine. "Valid" only means no counterexample
//! exists among the enumerated contexts.

pub mod bounds;
pub mod export;
mod search;

use rayon::prelude::*;

pub use bounds::{BoundsConfig, Literals};

use crate::semantics::{Addr, Env, EvalResult, Interp, State, TimedState, Value};
use crate::syntax::{Param, SlotType};
use crate::typing::{Obligation, ObligationKind, TypingState};
use search::{Cell, Goal, Mat, Problem, Search, Stop};

/// A context refuting an obligation.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub pre: State,
    /// Post-state, for goals read over a pair of states.
    pub post: Option<State>,
    pub rho: Env,
    pub loc: Option<Addr>,
    /// Index of the first goal that evaluates to false.
    pub failed_goal: usize,
    /// Environment of the constructor call, for `new` obligations.
    pub callee_env: Option<Env>,
    /// The enumerated cells in the order they were chosen.
    pub assignment: Vec<(String, String)>,
}

impl Counterexample {
    pub fn describe(&self) -> String {
        if self.assignment.is_empty() {
            return "in every context".to_string();
        }
        let parts: Vec<String> = self.assignment.iter().map(|(c, v)| format!("{} = {}", c, v)).collect();
        parts.join(", ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    ValidWithinBounds { contexts: u64 },
    Counterexample(Box<Counterexample>),
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::ValidWithinBounds { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ValidWithinBounds { .. } => "valid-within-bounds",
            Verdict::Counterexample(_) => "counterexample",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

fn literals_of(ob: &Obligation) -> Literals {
    let mut lits = Literals::default();
    for e in &ob.context.phi {
        lits.expr(e);
    }
    for g in ob.kind.goals() {
        lits.expr(g);
    }
    if let ObligationKind::Iffs { args, value, .. } = &ob.kind {
        for a in args.iter().chain(value.iter()) {
            lits.slot(a);
        }
    }
    lits
}

/// Decides one obligation within `cfg`.
pub fn discharge(sigma: &TypingState, ob: &Obligation, cfg: &BoundsConfig) -> Verdict {
    let goal = match &ob.kind {
        ObligationKind::Exprs { goals } => Goal::Exprs(goals),
        ObligationKind::Iffs {
            args,
            value,
            binder,
            goals,
            ..
        } => Goal::Iffs {
            args,
            value: value.as_ref(),
            binder,
            goals,
        },
    };
    let problem = Problem {
        sigma,
        iface: &ob.context.iface,
        contract: ob.context.contract.as_deref(),
        timed: ob.context.timed,
        phi: &ob.context.phi,
        goal,
        cfg,
        literals: literals_of(ob).0,
    };
    let mut search = Search::new(&problem, None);
    match search.run() {
        Ok(()) => Verdict::ValidWithinBounds {
            contexts: search.leaves,
        },
        Err(Stop::Found(found)) => {
            let (m, assignment, index, callee) = *found;
            Verdict::Counterexample(Box::new(Counterexample {
                pre: m.pre,
                post: if ob.context.timed { Some(m.post) } else { None },
                rho: m.rho,
                loc: m.loc,
                failed_goal: index,
                callee_env: callee,
                assignment,
            }))
        }
        Err(Stop::Budget) => Verdict::Unknown {
            reason: format!(
                "search budget of {} nodes exhausted after {} contexts without a counterexample",
                cfg.max_nodes, search.leaves
            ),
        },
        Err(Stop::Stuck(msg)) => Verdict::Unknown {
            reason: format!("evaluation failed: {}", msg),
        },
        Err(Stop::IllTyped(msg)) => Verdict::Unknown {
            reason: format!("generated an ill-typed context: {}", msg),
        },
        Err(Stop::Visitor) => unreachable!("no visitor installed"),
    }
}

/// Decides every obligation, in parallel. Verdicts are in input order.
pub fn discharge_all(sigma: &TypingState, obs: &[Obligation], cfg: &BoundsConfig) -> Vec<Verdict> {
    obs.par_iter().map(|ob| discharge(sigma, ob, cfg)).collect()
}

/// Re-evaluates a counterexample: `Ok(true)` when Φ holds in it and the
/// reported goal is false.
pub fn replay(sigma: &TypingState, ob: &Obligation, cex: &Counterexample) -> EvalResult<bool> {
    let interp = Interp::new(sigma);
    for e in &ob.context.phi {
        if !interp.eval_bool(&cex.pre, &cex.rho, cex.loc, e)? {
            return Ok(false);
        }
    }
    let goal = match ob.kind.goals().get(cex.failed_goal) {
        Some(g) => g,
        None => return Ok(false),
    };
    match &ob.kind {
        ObligationKind::Exprs { .. } => {
            let ts = match &cex.post {
                Some(post) => TimedState::T(&cex.pre, post),
                None => TimedState::U(&cex.pre),
            };
            Ok(interp.eval_expr(ts, &cex.rho, cex.loc, goal)? == Value::Bool(false))
        }
        ObligationKind::Iffs {
            args, value, binder, ..
        } => {
            let m = Mat {
                pre: cex.pre.clone(),
                post: cex.pre.clone(),
                rho: cex.rho.clone(),
                loc: cex.loc,
            };
            let (callee, s) = search::callee_env(&interp, &m, args, value.as_ref(), binder)?;
            Ok(!interp.eval_bool(&s, &callee, None, goal)?)
        }
    }
}

/// One enumerated context `(s, ρ, ℓ)`.
#[derive(Debug, Clone)]
pub struct Context {
    pub state: State,
    pub rho: Env,
    pub loc: Option<Addr>,
}

/// Enumerates contexts with `Σ ⊢ ρ :_s I` and `Σ ⊢ ℓ :_s A?`, varying the
/// calldata, the environment and the non-mapping fields of `ℓ`. Mappings
/// hold their defaults. `visit` returns `false` to stop early. Returns the
/// number of contexts visited.
pub fn enumerate_contexts(
    sigma: &TypingState,
    iface: &[Param],
    contract: Option<&str>,
    cfg: &BoundsConfig,
    visit: &mut dyn FnMut(&Context) -> bool,
) -> Result<u64, String> {
    let mut cells: Vec<Cell> = iface.iter().map(|p| Cell::Calldata(p.name.clone())).collect();
    for ev in [
        crate::syntax::EnvVar::Caller,
        crate::syntax::EnvVar::Origin,
        crate::syntax::EnvVar::Callvalue,
    ] {
        cells.push(Cell::Env(ev));
    }
    if let Some(a) = contract {
        let layout = sigma.layout(a).ok_or_else(|| format!("contract `{}` is not in Σ", a))?;
        for (x, ty) in layout {
            if !matches!(ty, SlotType::Mapping(m) if m.depth() > 0) {
                cells.push(Cell::Slot {
                    post: false,
                    loc: Addr(0),
                    field: x.clone(),
                    keys: Vec::new(),
                });
            }
        }
    }
    let problem = Problem {
        sigma,
        iface,
        contract,
        timed: false,
        phi: &[],
        goal: Goal::Enumerate(cells),
        cfg,
        literals: Default::default(),
    };
    let mut adapter = |m: &Mat| {
        visit(&Context {
            state: m.pre.clone(),
            rho: m.rho.clone(),
            loc: m.loc,
        })
    };
    let mut search = Search::new(&problem, Some(&mut adapter));
    match search.run() {
        Ok(()) | Err(Stop::Visitor) => Ok(search.leaves),
        Err(Stop::Budget) => Err("search budget exhausted".into()),
        Err(Stop::Stuck(m)) | Err(Stop::IllTyped(m)) => Err(m),
        Err(Stop::Found(_)) => unreachable!("enumeration has no goals"),
    }
}
