//! One-step reachability `Σ ⊢ s ⇝ s′`: every constructor of every contract,
//! and every transition at every location typed at its contract, under
//! enumerated well-typed environments.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::eval::{EvalError, Interp};
use super::state::{Env, State};
use super::value::{Addr, Value};
use crate::entailment::{BoundsConfig, Literals};
use crate::syntax::{
    AbiType, BaseType, Constructor, EnvVar, Expr, ExprKind, IntType, MappingExpr, Param, Ref, RefKind, SlotExpr,
    Transition,
};
use crate::typing::TypingState;
use crate::valuetyping;

/// Which entry point a step ran, where, and under which environment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StepLabel {
    pub contract: String,
    /// `None` for the constructor.
    pub transition: Option<String>,
    /// The new location for a constructor, the target for a transition.
    pub loc: Addr,
    #[serde(serialize_with = "crate::semantics::serial::ser_env")]
    pub rho: Env,
}

impl StepLabel {
    pub fn entry(&self) -> String {
        match &self.transition {
            None => format!("{}.constructor", self.contract),
            Some(t) => format!("{}.{}", self.contract, t),
        }
    }
}

impl std::fmt::Display for StepLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let args: Vec<String> = self.rho.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
        write!(f, "{} at {} ({})", self.entry(), self.loc, args.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub label: StepLabel,
    pub state: State,
    /// Returned value; `Unit` for constructors and caseless returns.
    pub ret: Value,
}

/// A candidate step whose evaluation failed for a reason other than a false
/// precondition.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub contract: String,
    pub transition: Option<String>,
    /// Target location, for transitions.
    pub loc: Option<Addr>,
    pub rho: Env,
    pub error: EvalError,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Successors {
    pub steps: Vec<Step>,
    pub failures: Vec<Failure>,
}

/// Environment variables an entry point can observe, including `origin`
/// through constructors it calls with `new`.
#[derive(Default)]
struct Usage {
    env: BTreeSet<EnvVar>,
    lits: Literals,
    seen: HashSet<String>,
}

impl Usage {
    fn expr(&mut self, sigma: &TypingState, e: &Expr) {
        self.lits.expr(e);
        match &e.kind {
            ExprKind::Int(_) | ExprKind::Bool(_) => {}
            ExprKind::Ref(r) | ExprKind::Addr(r) => self.reference(sigma, r),
            ExprKind::BinI(_, l, r) | ExprKind::BinB(_, l, r) | ExprKind::Cmp(_, l, r) | ExprKind::Eq(l, r) => {
                self.expr(sigma, l);
                self.expr(sigma, r);
            }
            ExprKind::Not(x) | ExprKind::InRange(_, x) => self.expr(sigma, x),
            ExprKind::Ite(c, t, f) => {
                self.expr(sigma, c);
                self.expr(sigma, t);
                self.expr(sigma, f);
            }
        }
    }

    fn reference(&mut self, sigma: &TypingState, r: &Ref) {
        match &r.kind {
            RefKind::Env(ev) => {
                self.env.insert(*ev);
            }
            RefKind::Coerce(i, _) | RefKind::Field(i, _) => self.reference(sigma, i),
            RefKind::Index(i, k) => {
                self.reference(sigma, i);
                self.expr(sigma, k);
            }
            _ => {}
        }
    }

    fn mapping(&mut self, sigma: &TypingState, m: &MappingExpr) {
        let pairs = match m {
            MappingExpr::Base(e) => return self.expr(sigma, e),
            MappingExpr::Lit { pairs, .. } => pairs,
            MappingExpr::Upd { base, pairs, .. } => {
                self.reference(sigma, base);
                pairs
            }
        };
        for (k, v) in pairs {
            self.expr(sigma, k);
            self.mapping(sigma, v);
        }
    }

    fn slot(&mut self, sigma: &TypingState, se: &SlotExpr) {
        match se {
            SlotExpr::Map(m) => self.mapping(sigma, m),
            SlotExpr::Ref(r) => self.reference(sigma, r),
            SlotExpr::Addr(i, _) => self.slot(sigma, i),
            SlotExpr::New {
                contract, value, args, ..
            } => {
                for a in args.iter().chain(value.iter().map(|v| v.as_ref())) {
                    self.slot(sigma, a);
                }
                if self.seen.insert(contract.clone()) {
                    if let Some(ctor) = sigma.constructor(contract) {
                        let mut inner = Usage {
                            seen: std::mem::take(&mut self.seen),
                            ..Usage::default()
                        };
                        inner.ctor_body(sigma, ctor);
                        if inner.env.contains(&EnvVar::Origin) {
                            self.env.insert(EnvVar::Origin);
                        }
                        self.seen = inner.seen;
                    }
                }
            }
        }
    }

    fn ctor_body(&mut self, sigma: &TypingState, ctor: &Constructor) {
        for case in &ctor.cases {
            self.expr(sigma, &case.cond);
            for c in &case.creates {
                self.slot(sigma, &c.rhs);
            }
        }
    }

    fn ctor(sigma: &TypingState, ctor: &Constructor) -> Usage {
        let mut u = Usage::default();
        for e in ctor.iff.iter().chain(&ctor.ensures) {
            u.expr(sigma, e);
        }
        u.ctor_body(sigma, ctor);
        u
    }

    fn trans(sigma: &TypingState, t: &Transition) -> Usage {
        let mut u = Usage::default();
        for e in t.iff.iter().chain(&t.ensures) {
            u.expr(sigma, e);
        }
        for case in &t.cases {
            u.expr(sigma, &case.cond);
            for up in &case.updates {
                u.reference(sigma, &up.target);
                u.slot(sigma, &up.rhs);
            }
            if let Some(r) = &case.returns {
                u.expr(sigma, r);
            }
        }
        u
    }
}

/// Candidate environments for one entry point in state `s`.
fn environments(sigma: &TypingState, s: &State, iface: &[Param], usage: &Usage, cfg: &BoundsConfig) -> Vec<Env> {
    let mut addrs: Vec<Value> = s.addresses().map(Value::Addr).collect();
    addrs.push(Value::Addr(s.fresh()));
    let int_samples = |t: IntType| -> Vec<Value> {
        cfg.int_samples(t, &usage.lits.0)
            .into_iter()
            .map(Value::Int)
            .collect()
    };
    let mut dims: Vec<(String, Vec<Value>)> = Vec::new();
    for p in iface {
        let vals = match &p.ty {
            AbiType::Base(BaseType::Int(t)) => int_samples(*t),
            AbiType::Base(BaseType::Bool) => vec![Value::Bool(false), Value::Bool(true)],
            AbiType::Base(BaseType::Address) => addrs.clone(),
            AbiType::ContractAddr(b) => s
                .iter()
                .filter(|(l, _)| valuetyping::location_has_contract(sigma, s, *l, b).is_ok())
                .map(|(l, _)| Value::Addr(l))
                .collect(),
        };
        dims.push((p.name.clone(), vals));
    }
    for ev in [EnvVar::Caller, EnvVar::Origin, EnvVar::Callvalue] {
        let mut vals = if ev == EnvVar::Callvalue {
            int_samples(IntType::uint(256))
        } else {
            addrs.clone()
        };
        if cfg.collapse_unused_env && !usage.env.contains(&ev) {
            vals.truncate(1);
        }
        dims.push((ev.name().to_string(), vals));
    }
    if dims.iter().any(|(_, v)| v.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; dims.len()];
    loop {
        let rho: Env = dims
            .iter()
            .zip(&idx)
            .map(|((name, vals), &i)| (name.clone(), vals[i].clone()))
            .collect();
        out.push(rho);
        let mut d = dims.len();
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < dims[d].1.len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

/// Enumerates the successors of `s`. Candidates whose preconditions are
/// false are skipped; other evaluation failures are returned separately.
pub fn step(interp: &Interp, s: &State, cfg: &BoundsConfig) -> Successors {
    let sigma = interp.sigma;
    let mut out = Successors::default();
    for (contract, ctor) in &sigma.cnstr {
        let usage = Usage::ctor(sigma, ctor);
        for rho in environments(sigma, s, &ctor.iface, &usage, cfg) {
            match interp.eval_ctor(s, &rho, contract, ctor) {
                Ok((l, s2)) => out.steps.push(Step {
                    label: StepLabel {
                        contract: contract.clone(),
                        transition: None,
                        loc: l,
                        rho,
                    },
                    state: s2,
                    ret: Value::Unit,
                }),
                Err(EvalError::PreconditionFailed { .. }) => {}
                Err(error) => out.failures.push(Failure {
                    contract: contract.clone(),
                    transition: None,
                    loc: None,
                    rho,
                    error,
                }),
            }
        }
    }
    for (l, inst) in s.iter() {
        let contract = &inst.contract;
        if valuetyping::location_has_contract(sigma, s, l, contract).is_err() {
            continue;
        }
        for t in sigma.transitions(contract) {
            let usage = Usage::trans(sigma, t);
            for rho in environments(sigma, s, &t.iface, &usage, cfg) {
                match interp.eval_trans(s, &rho, l, t) {
                    Ok((v, s2)) => out.steps.push(Step {
                        label: StepLabel {
                            contract: contract.clone(),
                            transition: Some(t.name.clone()),
                            loc: l,
                            rho,
                        },
                        state: s2,
                        ret: v,
                    }),
                    Err(EvalError::PreconditionFailed { .. }) => {}
                    Err(error) => out.failures.push(Failure {
                        contract: contract.clone(),
                        transition: Some(t.name.clone()),
                        loc: Some(l),
                        rho,
                        error,
                    }),
                }
            }
        }
    }
    out
}

/// Re-runs a labeled step. Constructor labels must name the location the
/// constructor allocates.
pub fn apply(interp: &Interp, s: &State, label: &StepLabel) -> Result<(Value, State), EvalError> {
    let sigma = interp.sigma;
    match &label.transition {
        None => {
            let ctor = sigma
                .constructor(&label.contract)
                .ok_or_else(|| EvalError::Stuck(format!("no constructor for `{}`", label.contract)))?;
            let (l, s2) = interp.eval_ctor(s, &label.rho, &label.contract, ctor)?;
            if l != label.loc {
                return Err(EvalError::Stuck(format!("constructor allocated {} instead of {}", l, label.loc)));
            }
            Ok((Value::Unit, s2))
        }
        Some(name) => {
            let t = sigma
                .transition(&label.contract, name)
                .ok_or_else(|| EvalError::Stuck(format!("no transition `{}.{}`", label.contract, name)))?;
            interp.eval_trans(s, &label.rho, label.loc, t)
        }
    }
}
