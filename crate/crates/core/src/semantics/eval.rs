//! Big-step evaluation of references, expressions, slot expressions, creates,
//! updates, constructors and transitions.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::state::{Env, Instance, State, TimedState, Timing};
use super::value::{default_of, Addr, Key, KeySort, MapValue, Value};
use crate::syntax::*;
use crate::typing::TypingState;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("stuck: {0}")]
    Stuck(String),
    #[error("unbound name `{0}`")]
    Unbound(String),
    #[error("expected an address, found {0}")]
    NotAnAddress(&'static str),
    #[error("expected a mapping, found {0}")]
    NotAMapping(&'static str),
    #[error("location {addr} has no field `{name}`")]
    MissingField { addr: Addr, name: String },
    #[error("precondition {index} does not hold")]
    PreconditionFailed { index: usize },
    #[error("no case condition holds")]
    NoCaseMatched,
    #[error("more than one case condition holds: {cases:?}")]
    MultipleCasesMatched { cases: Vec<usize> },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

impl EvalError {
    pub fn kind(&self) -> &'static str {
        match self {
            EvalError::Stuck(_) => "Stuck",
            EvalError::Unbound(_) => "Unbound",
            EvalError::NotAnAddress(_) => "NotAnAddress",
            EvalError::NotAMapping(_) => "NotAMapping",
            EvalError::MissingField { .. } => "MissingField",
            EvalError::PreconditionFailed { .. } => "PreconditionFailed",
            EvalError::NoCaseMatched => "NoCaseMatched",
            EvalError::MultipleCasesMatched { .. } => "MultipleCasesMatched",
            EvalError::ResourceLimit(_) => "ResourceLimit",
        }
    }

    /// Failures that a well-typed program with valid obligations must never hit.
    pub fn is_type_safety_violation(&self) -> bool {
        !matches!(
            self,
            EvalError::PreconditionFailed { .. } | EvalError::ResourceLimit(_)
        )
    }
}

pub type EvalResult<T> = Result<T, EvalError>;

fn stuck<T>(msg: impl Into<String>) -> EvalResult<T> {
    Err(EvalError::Stuck(msg.into()))
}

/// Deliberate deviations from the rules, used to check that the test suites
/// notice a wrong interpreter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Interleave each update's evaluation with its insertion.
    SequentialUpdates,
    /// Allocate at `max(dom s)` instead of `max(dom s) + 1`.
    FreshReuse,
    /// Let a transition's first true case win instead of requiring exactly one.
    FirstCaseWins,
}

impl Mutation {
    pub const ALL: [Mutation; 4] = [
        Mutation::None,
        Mutation::SequentialUpdates,
        Mutation::FreshReuse,
        Mutation::FirstCaseWins,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::None => "none",
            Mutation::SequentialUpdates => "sequential-updates",
            Mutation::FreshReuse => "fresh-reuse",
            Mutation::FirstCaseWins => "first-case-wins",
        }
    }
}

impl std::str::FromStr for Mutation {
    type Err = String;
    fn from_str(s: &str) -> Result<Mutation, String> {
        match s {
            "none" => Ok(Mutation::None),
            "sequential-updates" => Ok(Mutation::SequentialUpdates),
            "fresh-reuse" => Ok(Mutation::FreshReuse),
            "first-case-wins" => Ok(Mutation::FirstCaseWins),
            _ => Err(format!("unknown mutation `{}`", s)),
        }
    }
}

/// Exponents whose result would exceed this many bits are refused.
const MAX_EXP_BITS: u64 = 1 << 16;

/// `v1 ∘ v2` on integers. Division and remainder truncate toward zero and
/// return 0 on a zero divisor.
pub fn int_op(op: IntOp, a: &BigInt, b: &BigInt) -> EvalResult<BigInt> {
    Ok(match op {
        IntOp::Add => a + b,
        IntOp::Sub => a - b,
        IntOp::Mul => a * b,
        IntOp::Div => {
            if b.is_zero() {
                BigInt::zero()
            } else {
                a / b
            }
        }
        IntOp::Mod => {
            if b.is_zero() {
                BigInt::zero()
            } else {
                a % b
            }
        }
        IntOp::Exp => {
            if b.is_negative() {
                return stuck("negative exponent");
            }
            if a.is_zero() || a.abs().is_one() {
                if b.is_zero() {
                    BigInt::one()
                } else if a.is_zero() {
                    BigInt::zero()
                } else if a.is_positive() || (b % 2u32).is_zero() {
                    BigInt::one()
                } else {
                    -BigInt::one()
                }
            } else {
                let e = b.to_u64().unwrap_or(u64::MAX);
                if a.bits().saturating_mul(e) > MAX_EXP_BITS {
                    return Err(EvalError::ResourceLimit(format!(
                        "{} exp {} is too large",
                        a, b
                    )));
                }
                num_traits::pow(a.clone(), e as usize)
            }
        }
    })
}

fn expect_int(v: Value) -> EvalResult<BigInt> {
    match v {
        Value::Int(n) => Ok(n),
        other => stuck(format!("expected an integer, found {}", other.sort_name())),
    }
}

fn expect_bool(v: Value) -> EvalResult<bool> {
    match v {
        Value::Bool(b) => Ok(b),
        other => stuck(format!("expected a boolean, found {}", other.sort_name())),
    }
}

fn expect_addr(v: &Value) -> EvalResult<Addr> {
    match v {
        Value::Addr(a) => Ok(*a),
        other => Err(EvalError::NotAnAddress(other.sort_name())),
    }
}

fn key_of(v: &Value, sort: KeySort) -> EvalResult<Key> {
    match Key::from_value(v) {
        Some(k) if k.sort() == sort => Ok(k),
        _ => stuck(format!(
            "mapping key is {}, expected {}",
            v.sort_name(),
            sort.name()
        )),
    }
}

/// The interpreter. Holds Σ to look up constructors for `new`.
#[derive(Debug, Clone, Copy)]
pub struct Interp<'a> {
    pub sigma: &'a TypingState,
    pub mutation: Mutation,
}

impl<'a> Interp<'a> {
    pub fn new(sigma: &'a TypingState) -> Interp<'a> {
        Interp {
            sigma,
            mutation: Mutation::None,
        }
    }

    pub fn with_mutation(sigma: &'a TypingState, mutation: Mutation) -> Interp<'a> {
        Interp { sigma, mutation }
    }

    fn fresh(&self, s: &State) -> Addr {
        match self.mutation {
            Mutation::FreshReuse if !s.is_empty() => Addr(s.fresh().0 - 1),
            _ => s.fresh(),
        }
    }

    /// `ρ; env ⇓ℓ v`
    pub fn eval_env(&self, rho: &Env, ev: EnvVar, loc: Option<Addr>) -> EvalResult<Value> {
        match ev {
            EnvVar::This => match loc {
                Some(l) => Ok(Value::Addr(l)),
                None => stuck("`this` evaluated without a location"),
            },
            _ => rho
                .get(ev.name())
                .cloned()
                .ok_or_else(|| EvalError::Unbound(ev.name().to_string())),
        }
    }

    fn loc(loc: Option<Addr>, what: &str) -> EvalResult<Addr> {
        loc.ok_or_else(|| EvalError::Stuck(format!("storage reference `{}` without a location", what)))
    }

    fn read(s: &State, l: Addr, x: &str) -> EvalResult<Value> {
        match s.get(l) {
            None => stuck(format!("location {} is not allocated", l)),
            Some(inst) => inst.vars.get(x).cloned().ok_or(EvalError::MissingField {
                addr: l,
                name: x.to_string(),
            }),
        }
    }

    /// `⟨s^t; ρ; ref⟩ ⇓ℓ (v, t_p)`
    pub fn eval_ref(
        &self,
        ts: TimedState,
        rho: &Env,
        loc: Option<Addr>,
        r: &Ref,
    ) -> EvalResult<(Value, Timing)> {
        match &r.kind {
            RefKind::Env(ev) => Ok((self.eval_env(rho, *ev, loc)?, Timing::U)),
            RefKind::Var(x) => {
                if let Some(v) = rho.get(x) {
                    let t = if ts.is_timed() { Timing::Pre } else { Timing::U };
                    return Ok((v.clone(), t));
                }
                match ts {
                    TimedState::U(s) => Ok((Self::read(s, Self::loc(loc, x)?, x)?, Timing::U)),
                    TimedState::T(..) => stuck(format!(
                        "plain storage reference `{}` in a timed state",
                        x
                    )),
                }
            }
            RefKind::Pre(x) | RefKind::Post(x) => {
                if rho.contains_key(x) {
                    return stuck(format!("`{}` is bound in calldata", x));
                }
                match ts {
                    TimedState::T(pre, post) => {
                        let l = Self::loc(loc, x)?;
                        if matches!(r.kind, RefKind::Pre(_)) {
                            Ok((Self::read(pre, l, x)?, Timing::Pre))
                        } else {
                            Ok((Self::read(post, l, x)?, Timing::Post))
                        }
                    }
                    TimedState::U(_) => stuck(format!("timed reference to `{}` in an untimed state", x)),
                }
            }
            RefKind::Coerce(inner, _) => self.eval_ref(ts, rho, loc, inner),
            RefKind::Field(inner, x) => {
                let (v, t) = self.eval_ref(ts, rho, loc, inner)?;
                let l = expect_addr(&v)?;
                let store = match (ts, t) {
                    (TimedState::U(s), Timing::U) => s,
                    (TimedState::T(pre, _), Timing::Pre) => pre,
                    (TimedState::T(_, post), Timing::Post) => post,
                    _ => return stuck(format!("field `{}` read with mismatched timing", x)),
                };
                Ok((Self::read(store, l, x)?, t))
            }
            RefKind::Index(inner, k) => {
                let kv = self.eval_expr(ts, rho, loc, k)?;
                let (m, t) = self.eval_ref(ts, rho, loc, inner)?;
                match m {
                    Value::Map(m) => {
                        let key = key_of(&kv, m.key_sort())?;
                        Ok((m.get(&key).clone(), t))
                    }
                    other => Err(EvalError::NotAMapping(other.sort_name())),
                }
            }
        }
    }

    /// `⟨s; ρ; e⟩ ⇓ℓ v`
    pub fn eval_expr(&self, ts: TimedState, rho: &Env, loc: Option<Addr>, e: &Expr) -> EvalResult<Value> {
        match &e.kind {
            ExprKind::Int(n) => Ok(Value::Int(n.clone())),
            ExprKind::Bool(b) => Ok(Value::Bool(*b)),
            ExprKind::Ref(r) | ExprKind::Addr(r) => Ok(self.eval_ref(ts, rho, loc, r)?.0),
            ExprKind::InRange(t, inner) => {
                let n = expect_int(self.eval_expr(ts, rho, loc, inner)?)?;
                Ok(Value::Bool(t.contains(&n)))
            }
            ExprKind::BinI(op, l, r) => {
                let a = expect_int(self.eval_expr(ts, rho, loc, l)?)?;
                let b = expect_int(self.eval_expr(ts, rho, loc, r)?)?;
                Ok(Value::Int(int_op(*op, &a, &b)?))
            }
            ExprKind::BinB(op, l, r) => {
                let a = expect_bool(self.eval_expr(ts, rho, loc, l)?)?;
                let b = expect_bool(self.eval_expr(ts, rho, loc, r)?)?;
                Ok(Value::Bool(match op {
                    BoolOp::And => a && b,
                    BoolOp::Or => a || b,
                    BoolOp::Implies => !a || b,
                }))
            }
            ExprKind::Not(inner) => Ok(Value::Bool(!expect_bool(self.eval_expr(ts, rho, loc, inner)?)?)),
            ExprKind::Cmp(op, l, r) => {
                let a = expect_int(self.eval_expr(ts, rho, loc, l)?)?;
                let b = expect_int(self.eval_expr(ts, rho, loc, r)?)?;
                Ok(Value::Bool(match op {
                    CmpOp::Lt => a < b,
                    CmpOp::Le => a <= b,
                    CmpOp::Ge => a >= b,
                    CmpOp::Gt => a > b,
                }))
            }
            ExprKind::Ite(c, t, f) => {
                if expect_bool(self.eval_expr(ts, rho, loc, c)?)? {
                    self.eval_expr(ts, rho, loc, t)
                } else {
                    self.eval_expr(ts, rho, loc, f)
                }
            }
            ExprKind::Eq(l, r) => {
                let a = self.eval_expr(ts, rho, loc, l)?;
                let b = self.eval_expr(ts, rho, loc, r)?;
                Ok(Value::Bool(a == b))
            }
        }
    }

    /// Evaluates a boolean expression in an untimed state.
    pub fn eval_bool(&self, s: &State, rho: &Env, loc: Option<Addr>, e: &Expr) -> EvalResult<bool> {
        expect_bool(self.eval_expr(TimedState::U(s), rho, loc, e)?)
    }

    fn apply_pairs(
        &self,
        s: &State,
        rho: &Env,
        loc: Option<Addr>,
        mut base: MapValue,
        pairs: &Pairs,
    ) -> EvalResult<Value> {
        let mut evaluated = Vec::with_capacity(pairs.len());
        for (k, m) in pairs {
            let kv = self.eval_expr(TimedState::U(s), rho, loc, k)?;
            let key = key_of(&kv, base.key_sort())?;
            evaluated.push((key, self.eval_mapping(s, rho, loc, m)?));
        }
        for (k, v) in evaluated {
            base.set(k, v);
        }
        Ok(Value::Map(base))
    }

    /// `⟨s; ρ; m⟩ ⇓ℓ v`
    pub fn eval_mapping(&self, s: &State, rho: &Env, loc: Option<Addr>, m: &MappingExpr) -> EvalResult<Value> {
        match m {
            MappingExpr::Base(e) => self.eval_expr(TimedState::U(s), rho, loc, e),
            MappingExpr::Lit { pairs, annot, .. } => {
                let mt = annot
                    .as_ref()
                    .ok_or_else(|| EvalError::Stuck("mapping literal without annotation".into()))?;
                let base = match default_of(mt) {
                    Value::Map(m) => m,
                    _ => return stuck("mapping literal annotated with a base type"),
                };
                self.apply_pairs(s, rho, loc, base, pairs)
            }
            MappingExpr::Upd { base, pairs, .. } => {
                let (v, _) = self.eval_ref(TimedState::U(s), rho, loc, base)?;
                match v {
                    Value::Map(f) => self.apply_pairs(s, rho, loc, f, pairs),
                    other => Err(EvalError::NotAMapping(other.sort_name())),
                }
            }
        }
    }

    /// `⟨s; ρ; se⟩ ⇓ℓ (v, s')`
    pub fn eval_slot(&self, s: &State, rho: &Env, loc: Option<Addr>, se: &SlotExpr) -> EvalResult<(Value, State)> {
        match se {
            SlotExpr::Map(m) => Ok((self.eval_mapping(s, rho, loc, m)?, s.clone())),
            SlotExpr::Ref(r) => Ok((self.eval_ref(TimedState::U(s), rho, loc, r)?.0, s.clone())),
            SlotExpr::Addr(inner, _) => self.eval_slot(s, rho, loc, inner),
            SlotExpr::New {
                contract,
                value,
                args,
                ..
            } => {
                let ctor = self
                    .sigma
                    .constructor(contract)
                    .ok_or_else(|| EvalError::Stuck(format!("no constructor for `{}`", contract)))?;
                if ctor.payable != value.is_some() {
                    return stuck(format!("payability of `new {}` does not match its constructor", contract));
                }
                if ctor.iface.len() != args.len() {
                    return stuck(format!("`new {}` has the wrong number of arguments", contract));
                }
                let mut cur = s.clone();
                let mut callee = Env::new();
                for (p, a) in ctor.iface.iter().zip(args) {
                    let (v, next) = self.eval_slot(&cur, rho, loc, a)?;
                    callee.insert(p.name.clone(), v);
                    cur = next;
                }
                let callvalue = match value {
                    Some(v) => {
                        let (v, next) = self.eval_slot(&cur, rho, loc, v)?;
                        cur = next;
                        v
                    }
                    None => Value::int(0),
                };
                let origin = rho
                    .get("origin")
                    .cloned()
                    .ok_or_else(|| EvalError::Unbound("origin".into()))?;
                callee.insert("caller".into(), Value::Addr(loc.unwrap_or(Addr(0))));
                callee.insert("origin".into(), origin);
                callee.insert("callvalue".into(), callvalue);
                let (l, s2) = self.eval_ctor_cases(&cur, &callee, contract, ctor)?;
                Ok((Value::Addr(l), s2))
            }
        }
    }

    /// `s; ρ; creates ⇓Id (ℓ, s')`: evaluate every right-hand side, then
    /// allocate a fresh location for the new instance.
    pub fn eval_creates(&self, s: &State, rho: &Env, contract: &str, creates: &[Create]) -> EvalResult<(Addr, State)> {
        let mut cur = s.clone();
        let mut vars = std::collections::BTreeMap::new();
        for c in creates {
            let (v, next) = self.eval_slot(&cur, rho, None, &c.rhs)?;
            vars.insert(c.name.clone(), v);
            cur = next;
        }
        let l = self.fresh(&cur);
        cur.insert(
            l,
            Instance {
                contract: contract.to_string(),
                vars,
            },
        );
        Ok((l, cur))
    }

    /// `s; ρ; ref; v ↪ s'`
    pub fn insert(&self, s: &State, rho: &Env, loc: Option<Addr>, target: &Ref, v: Value) -> EvalResult<State> {
        let (l, x) = match &target.kind {
            RefKind::Var(x) => (Self::loc(loc, x)?, x),
            RefKind::Field(inner, x) => {
                let (lv, t) = self.eval_ref(TimedState::U(s), rho, loc, inner)?;
                if t != Timing::U {
                    return stuck("field insertion through a timed reference");
                }
                (expect_addr(&lv)?, x)
            }
            _ => return stuck(format!("`{}` is not an assignable reference", target)),
        };
        let mut out = s.clone();
        match out.get_mut(l) {
            None => stuck(format!("location {} is not allocated", l)),
            Some(inst) => match inst.vars.get_mut(x) {
                Some(slot) => {
                    *slot = v;
                    Ok(out)
                }
                None => Err(EvalError::MissingField {
                    addr: l,
                    name: x.clone(),
                }),
            },
        }
    }

    /// `⟨s; ρ; updates⟩ ⇓ℓ s'`: all right-hand sides first, then all insertions.
    pub fn eval_updates(&self, s: &State, rho: &Env, loc: Option<Addr>, updates: &[Update]) -> EvalResult<State> {
        let mut cur = s.clone();
        if self.mutation == Mutation::SequentialUpdates {
            for u in updates {
                let (v, next) = self.eval_slot(&cur, rho, loc, &u.rhs)?;
                cur = self.insert(&next, rho, loc, &u.target, v)?;
            }
            return Ok(cur);
        }
        let mut values = Vec::with_capacity(updates.len());
        for u in updates {
            let (v, next) = self.eval_slot(&cur, rho, loc, &u.rhs)?;
            values.push(v);
            cur = next;
        }
        for (u, v) in updates.iter().zip(values) {
            cur = self.insert(&cur, rho, loc, &u.target, v)?;
        }
        Ok(cur)
    }

    /// Index of the unique true condition.
    fn select_case<'e>(
        &self,
        s: &State,
        rho: &Env,
        loc: Option<Addr>,
        conds: impl Iterator<Item = &'e Expr>,
    ) -> EvalResult<usize> {
        let mut hits = Vec::new();
        for (i, c) in conds.enumerate() {
            if self.eval_bool(s, rho, loc, c)? {
                hits.push(i);
                if self.mutation == Mutation::FirstCaseWins {
                    break;
                }
            }
        }
        match hits.len() {
            0 => Err(EvalError::NoCaseMatched),
            1 => Ok(hits[0]),
            _ => Err(EvalError::MultipleCasesMatched { cases: hits }),
        }
    }

    /// `s; ρ; ccases ⇓Id (ℓ, s')`
    pub fn eval_ctor_cases(&self, s: &State, rho: &Env, contract: &str, ctor: &Constructor) -> EvalResult<(Addr, State)> {
        let j = self.select_case(s, rho, None, ctor.cases.iter().map(|c| &c.cond))?;
        self.eval_creates(s, rho, contract, &ctor.cases[j].creates)
    }

    /// `s; ρ; cnstr ⇓Id (ℓ, s')`
    pub fn eval_ctor(&self, s: &State, rho: &Env, contract: &str, ctor: &Constructor) -> EvalResult<(Addr, State)> {
        for (i, pre) in ctor.iff.iter().enumerate() {
            if !self.eval_bool(s, rho, None, pre)? {
                return Err(EvalError::PreconditionFailed { index: i });
            }
        }
        self.eval_ctor_cases(s, rho, contract, ctor)
    }

    /// `⟨s; ρ; tcases⟩ ⇓ℓ (v, s')`
    pub fn eval_trans_cases(&self, s: &State, rho: &Env, loc: Addr, t: &Transition) -> EvalResult<(Value, State)> {
        let j = self.select_case(s, rho, Some(loc), t.cases.iter().map(|c| &c.cond))?;
        let case = &t.cases[j];
        let s2 = self.eval_updates(s, rho, Some(loc), &case.updates)?;
        let v = match &case.returns {
            Some(e) => self.eval_expr(TimedState::T(s, &s2), rho, Some(loc), e)?,
            None => Value::Unit,
        };
        Ok((v, s2))
    }

    /// `s; ρ; trans ⇓ℓ (v, s')`
    pub fn eval_trans(&self, s: &State, rho: &Env, loc: Addr, t: &Transition) -> EvalResult<(Value, State)> {
        for (i, pre) in t.iff.iter().enumerate() {
            if !self.eval_bool(s, rho, Some(loc), pre)? {
                return Err(EvalError::PreconditionFailed { index: i });
            }
        }
        self.eval_trans_cases(s, rho, loc, t)
    }

    /// Index of the first postcondition of a constructor that fails on `s'`.
    pub fn check_ctor_posts(&self, s2: &State, rho: &Env, loc: Addr, ctor: &Constructor) -> EvalResult<Option<usize>> {
        for (i, post) in ctor.ensures.iter().enumerate() {
            if !self.eval_bool(s2, rho, Some(loc), post)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Index of the first postcondition of a transition that fails on `(s, s')`.
    pub fn check_trans_posts(&self, s: &State, s2: &State, rho: &Env, loc: Addr, t: &Transition) -> EvalResult<Option<usize>> {
        for (i, post) in t.ensures.iter().enumerate() {
            let v = self.eval_expr(TimedState::T(s, s2), rho, Some(loc), post)?;
            if !expect_bool(v)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Index of the first invariant of `contract` that fails at `loc`, under the empty environment.
    pub fn check_invariants(&self, s: &State, loc: Addr, invariants: &[Expr]) -> EvalResult<Option<usize>> {
        let empty = Env::new();
        for (i, inv) in invariants.iter().enumerate() {
            if !self.eval_bool(s, &empty, Some(loc), inv)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(i: i64) -> BigInt {
        BigInt::from(i)
    }

    #[test]
    fn division_and_modulo() {
        assert_eq!(int_op(IntOp::Div, &n(5), &n(0)).unwrap(), n(0));
        assert_eq!(int_op(IntOp::Mod, &n(5), &n(0)).unwrap(), n(0));
        assert_eq!(int_op(IntOp::Div, &n(7), &n(2)).unwrap(), n(3));
        assert_eq!(int_op(IntOp::Div, &n(-7), &n(2)).unwrap(), n(-3));
        assert_eq!(int_op(IntOp::Mod, &n(-7), &n(2)).unwrap(), n(-1));
        assert_eq!(int_op(IntOp::Mod, &n(7), &n(-2)).unwrap(), n(1));
    }

    #[test]
    fn exponentiation() {
        assert_eq!(int_op(IntOp::Exp, &n(2), &n(10)).unwrap(), n(1024));
        assert_eq!(int_op(IntOp::Exp, &n(0), &n(0)).unwrap(), n(1));
        assert_eq!(int_op(IntOp::Exp, &n(-1), &n(3)).unwrap(), n(-1));
        assert!(matches!(int_op(IntOp::Exp, &n(2), &n(-1)), Err(EvalError::Stuck(_))));
        assert!(matches!(
            int_op(IntOp::Exp, &n(2), &(BigInt::one() << 100)),
            Err(EvalError::ResourceLimit(_))
        ));
        assert_eq!(int_op(IntOp::Exp, &n(1), &(BigInt::one() << 100)).unwrap(), n(1));
    }

    #[test]
    fn environment_lookup() {
        let sigma = TypingState::new();
        let it = Interp::new(&sigma);
        let mut rho = Env::new();
        rho.insert("caller".into(), Value::addr(2));
        assert_eq!(it.eval_env(&rho, EnvVar::This, Some(Addr(7))).unwrap(), Value::addr(7));
        assert_eq!(it.eval_env(&rho, EnvVar::Caller, None).unwrap(), Value::addr(2));
        assert_eq!(
            it.eval_env(&rho, EnvVar::Callvalue, None),
            Err(EvalError::Unbound("callvalue".into()))
        );
    }
}
