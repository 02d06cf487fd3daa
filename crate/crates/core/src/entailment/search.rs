//! Depth-first search over well-typed contexts.
//!
//! Contexts are built lazily: a cell (calldata name, environment variable,
//! storage field or mapping entry) only gets enumerated once evaluation of
//! Φ or the goals actually reaches it. Unreached cells keep their type's
//! default, so every materialized context is well typed.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::bounds::BoundsConfig;
use crate::semantics::{
    default_of, Addr, Env, EvalError, EvalResult, Instance, Interp, Key, State, TimedState, Timing,
    Value,
};
use crate::syntax::{
    BaseType, EnvVar, Expr, ExprKind, IntType, MappingExpr, MappingType, Param, Ref, RefKind, SlotExpr,
    SlotType,
};
use crate::typing::TypingState;
use crate::valuetyping;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Cell {
    Calldata(String),
    Env(EnvVar),
    Slot {
        post: bool,
        loc: Addr,
        field: String,
        keys: Vec<Key>,
    },
}

impl Cell {
    pub(crate) fn render(&self, loc: Option<Addr>) -> String {
        match self {
            Cell::Calldata(x) => x.clone(),
            Cell::Env(ev) => ev.name().to_string(),
            Cell::Slot { post, loc: l, field, keys } => {
                let mut s = if Some(*l) == loc {
                    field.clone()
                } else {
                    format!("{}.{}", l, field)
                };
                for k in keys {
                    s.push_str(&format!("[{}]", k.to_value()));
                }
                if *post {
                    format!("post({})", s)
                } else {
                    s
                }
            }
        }
    }
}

pub(crate) enum Goal<'a> {
    Exprs(&'a [Expr]),
    Iffs {
        args: &'a [SlotExpr],
        value: Option<&'a SlotExpr>,
        binder: &'a [Param],
        goals: &'a [Expr],
    },
    /// Visit every combination of the listed cells.
    Enumerate(Vec<Cell>),
}

pub(crate) struct Problem<'a> {
    pub sigma: &'a TypingState,
    pub iface: &'a [Param],
    pub contract: Option<&'a str>,
    pub timed: bool,
    pub phi: &'a [Expr],
    pub goal: Goal<'a>,
    pub cfg: &'a BoundsConfig,
    pub literals: BTreeSet<BigInt>,
}

/// A fully materialized context.
#[derive(Debug, Clone)]
pub(crate) struct Mat {
    pub pre: State,
    pub post: State,
    pub rho: Env,
    pub loc: Option<Addr>,
}

impl Mat {
    fn ts(&self, timed: bool) -> TimedState<'_> {
        if timed {
            TimedState::T(&self.pre, &self.post)
        } else {
            TimedState::U(&self.pre)
        }
    }
}

pub(crate) enum Leaf {
    /// Goal `index` evaluated to false.
    Fails { index: usize, callee: Option<Env> },
    Holds,
}

pub(crate) enum Stop {
    Budget,
    Stuck(String),
    IllTyped(String),
    Found(Box<(Mat, Vec<(String, String)>, usize, Option<Env>)>),
    Visitor,
}

enum Choice {
    Val(Value),
    Fresh(String),
}

enum Located {
    Need(Cell),
    At(Option<Cell>),
}

pub(crate) struct Search<'p, 'v> {
    p: &'p Problem<'p>,
    interp: Interp<'p>,
    assigned: BTreeMap<Cell, Value>,
    order: Vec<Cell>,
    instances: Vec<String>,
    pub nodes: u64,
    pub leaves: u64,
    visitor: Option<&'v mut dyn FnMut(&Mat) -> bool>,
}

fn stuck(e: EvalError) -> Stop {
    Stop::Stuck(e.to_string())
}

fn set_path(v: &mut Value, keys: &[Key], val: Value) {
    match keys.split_first() {
        None => *v = val,
        Some((k, rest)) => {
            if let Value::Map(m) = v {
                let mut inner = m.get(k).clone();
                set_path(&mut inner, rest, val);
                m.set(k.clone(), inner);
            }
        }
    }
}

fn uint256() -> IntType {
    IntType::uint(256)
}

impl<'p, 'v> Search<'p, 'v> {
    pub fn new(p: &'p Problem<'p>, visitor: Option<&'v mut dyn FnMut(&Mat) -> bool>) -> Self {
        Search {
            p,
            interp: Interp::new(p.sigma),
            assigned: BTreeMap::new(),
            order: Vec::new(),
            instances: p.contract.map(|c| vec![c.to_string()]).unwrap_or_default(),
            nodes: 0,
            leaves: 0,
            visitor,
        }
    }

    pub fn run(&mut self) -> Result<(), Stop> {
        self.node()
    }

    fn default_value(&self, ty: &SlotType, next: &mut u64, extra: &mut Vec<(Addr, Instance)>) -> Value {
        match ty.referenced_contract() {
            Some(c) => {
                let l = Addr(*next);
                *next += 1;
                let inst = self.default_instance(c, next, extra);
                extra.push((l, inst));
                Value::Addr(l)
            }
            None => match ty.as_mapping() {
                Some(m) => default_of(&m),
                None => Value::Unit,
            },
        }
    }

    fn default_instance(&self, c: &str, next: &mut u64, extra: &mut Vec<(Addr, Instance)>) -> Instance {
        let mut vars = BTreeMap::new();
        if let Some(layout) = self.p.sigma.layout(c) {
            for (x, ty) in layout {
                vars.insert(x.clone(), self.default_value(ty, next, extra));
            }
        }
        Instance {
            contract: c.to_string(),
            vars,
        }
    }

    fn materialize(&self) -> Mat {
        let mut next = self.instances.len() as u64;
        let mut extra = Vec::new();
        let mut pre = State::empty();
        for (i, c) in self.instances.iter().enumerate() {
            let inst = self.default_instance(c, &mut next, &mut extra);
            pre.insert(Addr(i as u64), inst);
        }
        let mut rho = Env::new();
        for p in self.p.iface {
            let v = match self.assigned.get(&Cell::Calldata(p.name.clone())) {
                Some(v) => v.clone(),
                None => self.default_value(&SlotType::from_abi(&p.ty), &mut next, &mut extra),
            };
            rho.insert(p.name.clone(), v);
        }
        for ev in [EnvVar::Caller, EnvVar::Origin, EnvVar::Callvalue] {
            let v = match self.assigned.get(&Cell::Env(ev)) {
                Some(v) => v.clone(),
                None if ev == EnvVar::Callvalue => Value::int(0),
                None => Value::addr(0),
            };
            rho.insert(ev.name().to_string(), v);
        }
        for (l, inst) in extra {
            pre.insert(l, inst);
        }
        let mut post = pre.clone();
        for (cell, v) in &self.assigned {
            if let Cell::Slot { post: is_post, loc, field, keys } = cell {
                let s = if *is_post { &mut post } else { &mut pre };
                if let Some(slot) = s.get_mut(*loc).and_then(|i| i.vars.get_mut(field)) {
                    set_path(slot, keys, v.clone());
                }
            }
        }
        Mat {
            pre,
            post,
            rho,
            loc: self.p.contract.map(|_| Addr(0)),
        }
    }

    fn cell_type(&self, c: &Cell) -> Option<SlotType> {
        match c {
            Cell::Calldata(x) => self.p.iface.iter().find(|p| &p.name == x).map(|p| SlotType::from_abi(&p.ty)),
            Cell::Env(EnvVar::Callvalue) => Some(SlotType::base(BaseType::Int(uint256()))),
            Cell::Env(_) => Some(SlotType::base(BaseType::Address)),
            Cell::Slot { loc, field, keys, .. } => {
                let contract = self.instances.get(loc.0 as usize)?;
                let mut ty = self.p.sigma.field_type(contract, field)?.clone();
                for _ in keys {
                    ty = match ty.as_mapping()? {
                        MappingType::Map(_, v) => match *v {
                            MappingType::Base(b) => SlotType::base(b),
                            m => SlotType::Mapping(m),
                        },
                        MappingType::Base(_) => return None,
                    };
                }
                Some(ty)
            }
        }
    }

    fn choices(&self, c: &Cell) -> Vec<Choice> {
        let ty = match self.cell_type(c) {
            Some(t) => t,
            None => return vec![Choice::Val(Value::Unit)],
        };
        if let Cell::Slot { post, loc, field, keys } = c {
            if !keys.is_empty() {
                let used = self
                    .assigned
                    .keys()
                    .filter(|k| match k {
                        Cell::Slot {
                            post: p2,
                            loc: l2,
                            field: f2,
                            keys: k2,
                        } => p2 == post && l2 == loc && f2 == field && k2.len() == keys.len(),
                        _ => false,
                    })
                    .count();
                if used >= self.p.cfg.map_footprint {
                    return vec![Choice::Val(match ty.as_mapping() {
                        Some(m) => default_of(&m),
                        None => Value::Unit,
                    })];
                }
            }
        }
        if let Some(b) = ty.referenced_contract() {
            let mut out: Vec<Choice> = self
                .instances
                .iter()
                .enumerate()
                .filter(|(_, c)| c.as_str() == b)
                .map(|(i, _)| Choice::Val(Value::addr(i as u64)))
                .collect();
            if self.instances.len() < self.p.cfg.max_instances.max(1) {
                out.push(Choice::Fresh(b.to_string()));
            }
            return out;
        }
        match ty.as_base() {
            Some(BaseType::Int(t)) => self
                .p
                .cfg
                .int_samples(t, &self.p.literals)
                .into_iter()
                .map(|n| Choice::Val(Value::Int(n)))
                .collect(),
            Some(BaseType::Bool) => vec![Choice::Val(Value::Bool(false)), Choice::Val(Value::Bool(true))],
            Some(BaseType::Address) => self.p.cfg.addresses().map(|a| Choice::Val(Value::addr(a))).collect(),
            None => vec![Choice::Val(match ty.as_mapping() {
                Some(m) => default_of(&m),
                None => Value::Unit,
            })],
        }
    }

    fn node(&mut self) -> Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.p.cfg.max_nodes {
            return Err(Stop::Budget);
        }
        let m = self.materialize();
        let pre = TimedState::U(&m.pre);
        for e in self.p.phi {
            if let Some(c) = self.need_expr(&m, pre, e).map_err(stuck)? {
                return self.branch(c);
            }
        }
        for e in self.p.phi {
            if !self.interp.eval_bool(&m.pre, &m.rho, m.loc, e).map_err(stuck)? {
                return Ok(());
            }
        }
        if let Some(c) = self.need_goal(&m).map_err(stuck)? {
            return self.branch(c);
        }
        self.leaves += 1;
        self.check_well_typed(&m)?;
        if let Some(visit) = self.visitor.as_mut() {
            return if visit(&m) { Ok(()) } else { Err(Stop::Visitor) };
        }
        match self.check_goals(&m).map_err(stuck)? {
            Leaf::Holds => Ok(()),
            Leaf::Fails { index, callee } => {
                let assignment = self
                    .order
                    .iter()
                    .map(|c| (c.render(m.loc), self.assigned[c].to_string()))
                    .collect();
                Err(Stop::Found(Box::new((m, assignment, index, callee))))
            }
        }
    }

    fn branch(&mut self, c: Cell) -> Result<(), Stop> {
        for choice in self.choices(&c) {
            let fresh = match choice {
                Choice::Val(v) => {
                    self.assigned.insert(c.clone(), v);
                    false
                }
                Choice::Fresh(b) => {
                    self.instances.push(b);
                    self.assigned.insert(c.clone(), Value::addr(self.instances.len() as u64 - 1));
                    true
                }
            };
            self.order.push(c.clone());
            let r = self.node();
            self.order.pop();
            self.assigned.remove(&c);
            if fresh {
                self.instances.pop();
            }
            r?;
        }
        Ok(())
    }

    fn check_well_typed(&self, m: &Mat) -> Result<(), Stop> {
        let ill = |e: valuetyping::ValueTypeError| Stop::IllTyped(e.to_string());
        valuetyping::store_well_typed(self.p.sigma, &m.pre).map_err(ill)?;
        valuetyping::env_has_iface(self.p.sigma, &m.pre, &m.rho, self.p.iface).map_err(ill)?;
        if let (Some(l), Some(a)) = (m.loc, self.p.contract) {
            valuetyping::location_has_contract(self.p.sigma, &m.pre, l, a).map_err(ill)?;
        }
        if self.p.timed {
            valuetyping::store_well_typed(self.p.sigma, &m.post).map_err(ill)?;
        }
        Ok(())
    }

    fn check_goals(&self, m: &Mat) -> EvalResult<Leaf> {
        match &self.p.goal {
            Goal::Enumerate(_) => Ok(Leaf::Holds),
            Goal::Exprs(goals) => {
                let ts = m.ts(self.p.timed);
                for (i, g) in goals.iter().enumerate() {
                    if self.interp.eval_expr(ts, &m.rho, m.loc, g)? != Value::Bool(true) {
                        return Ok(Leaf::Fails { index: i, callee: None });
                    }
                }
                Ok(Leaf::Holds)
            }
            Goal::Iffs {
                args,
                value,
                binder,
                goals,
            } => {
                let (callee, s) = callee_env(&self.interp, m, args, *value, binder)?;
                for (i, g) in goals.iter().enumerate() {
                    if !self.interp.eval_bool(&s, &callee, None, g)? {
                        return Ok(Leaf::Fails {
                            index: i,
                            callee: Some(callee),
                        });
                    }
                }
                Ok(Leaf::Holds)
            }
        }
    }

    fn need_goal(&self, m: &Mat) -> EvalResult<Option<Cell>> {
        match &self.p.goal {
            Goal::Exprs(goals) => {
                let ts = m.ts(self.p.timed);
                for g in goals.iter() {
                    if let Some(c) = self.need_expr(m, ts, g)? {
                        return Ok(Some(c));
                    }
                }
                Ok(None)
            }
            Goal::Iffs { args, value, .. } => {
                let ts = TimedState::U(&m.pre);
                for a in args.iter().chain(value.iter().copied()) {
                    if let Some(c) = self.need_slot(m, ts, a)? {
                        return Ok(Some(c));
                    }
                }
                Ok(None)
            }
            Goal::Enumerate(cells) => Ok(cells.iter().find(|c| !self.assigned.contains_key(c)).cloned()),
        }
    }

    fn unassigned(&self, c: Option<Cell>) -> Option<Cell> {
        c.filter(|c| !self.assigned.contains_key(c))
    }

    fn need_expr(&self, m: &Mat, ts: TimedState, e: &Expr) -> EvalResult<Option<Cell>> {
        match &e.kind {
            ExprKind::Int(_) | ExprKind::Bool(_) => Ok(None),
            ExprKind::Ref(r) | ExprKind::Addr(r) => self.need_ref(m, ts, r),
            ExprKind::BinI(_, l, r) | ExprKind::BinB(_, l, r) | ExprKind::Cmp(_, l, r) | ExprKind::Eq(l, r) => {
                match self.need_expr(m, ts, l)? {
                    Some(c) => Ok(Some(c)),
                    None => self.need_expr(m, ts, r),
                }
            }
            ExprKind::Not(x) | ExprKind::InRange(_, x) => self.need_expr(m, ts, x),
            ExprKind::Ite(c, t, f) => {
                for x in [c, t, f] {
                    if let Some(cell) = self.need_expr(m, ts, x)? {
                        return Ok(Some(cell));
                    }
                }
                Ok(None)
            }
        }
    }

    fn need_ref(&self, m: &Mat, ts: TimedState, r: &Ref) -> EvalResult<Option<Cell>> {
        Ok(match self.locate(m, ts, r)? {
            Located::Need(c) => Some(c),
            Located::At(c) => self.unassigned(c),
        })
    }

    fn need_mapping(&self, m: &Mat, ts: TimedState, me: &MappingExpr) -> EvalResult<Option<Cell>> {
        let pairs = match me {
            MappingExpr::Base(e) => return self.need_expr(m, ts, e),
            MappingExpr::Lit { pairs, .. } => pairs,
            MappingExpr::Upd { base, pairs, .. } => {
                if let Some(c) = self.need_ref(m, ts, base)? {
                    return Ok(Some(c));
                }
                pairs
            }
        };
        for (k, v) in pairs {
            if let Some(c) = self.need_expr(m, ts, k)? {
                return Ok(Some(c));
            }
            if let Some(c) = self.need_mapping(m, ts, v)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    fn need_slot(&self, m: &Mat, ts: TimedState, se: &SlotExpr) -> EvalResult<Option<Cell>> {
        match se {
            SlotExpr::Map(me) => self.need_mapping(m, ts, me),
            SlotExpr::Ref(r) => self.need_ref(m, ts, r),
            SlotExpr::Addr(inner, _) => self.need_slot(m, ts, inner),
            SlotExpr::New { value, args, .. } => {
                for a in args.iter().chain(value.iter().map(|b| b.as_ref())) {
                    if let Some(c) = self.need_slot(m, ts, a)? {
                        return Ok(Some(c));
                    }
                }
                Ok(None)
            }
        }
    }

    /// The cell a reference denotes, or the first unassigned cell needed to
    /// find out.
    fn locate(&self, m: &Mat, ts: TimedState, r: &Ref) -> EvalResult<Located> {
        Ok(match &r.kind {
            RefKind::Env(EnvVar::This) => Located::At(None),
            RefKind::Env(ev) => Located::At(Some(Cell::Env(*ev))),
            RefKind::Var(x) => {
                if self.p.iface.iter().any(|p| &p.name == x) {
                    Located::At(Some(Cell::Calldata(x.clone())))
                } else {
                    Located::At(m.loc.map(|l| slot(false, l, x)))
                }
            }
            RefKind::Pre(x) => Located::At(m.loc.map(|l| slot(false, l, x))),
            RefKind::Post(x) => Located::At(m.loc.map(|l| slot(true, l, x))),
            RefKind::Coerce(inner, _) => self.locate(m, ts, inner)?,
            RefKind::Field(inner, x) => {
                match self.locate(m, ts, inner)? {
                    Located::Need(c) => return Ok(Located::Need(c)),
                    Located::At(c) => {
                        if let Some(c) = self.unassigned(c) {
                            return Ok(Located::Need(c));
                        }
                    }
                }
                let (v, t) = self.interp.eval_ref(ts, &m.rho, m.loc, inner)?;
                match v.as_addr() {
                    Some(l) => Located::At(Some(slot(t == Timing::Post, l, x))),
                    None => Located::At(None),
                }
            }
            RefKind::Index(inner, k) => {
                if let Some(c) = self.need_expr(m, ts, k)? {
                    return Ok(Located::Need(c));
                }
                match self.locate(m, ts, inner)? {
                    Located::Need(c) => Located::Need(c),
                    Located::At(Some(Cell::Slot { post, loc, field, mut keys })) => {
                        let kv = self.interp.eval_expr(ts, &m.rho, m.loc, k)?;
                        match Key::from_value(&kv) {
                            Some(key) => {
                                keys.push(key);
                                Located::At(Some(Cell::Slot { post, loc, field, keys }))
                            }
                            None => Located::At(None),
                        }
                    }
                    Located::At(_) => Located::At(None),
                }
            }
        })
    }
}

fn slot(post: bool, loc: Addr, x: &str) -> Cell {
    Cell::Slot {
        post,
        loc,
        field: x.to_string(),
        keys: Vec::new(),
    }
}

/// Evaluates the arguments of a `new` left to right, threading the state,
/// and returns the callee's environment with the state after the arguments.
pub(crate) fn callee_env(
    interp: &Interp,
    m: &Mat,
    args: &[SlotExpr],
    value: Option<&SlotExpr>,
    binder: &[Param],
) -> EvalResult<(Env, State)> {
    let mut cur = m.pre.clone();
    let mut callee = Env::new();
    for (p, a) in binder.iter().zip(args) {
        let (v, next) = interp.eval_slot(&cur, &m.rho, m.loc, a)?;
        callee.insert(p.name.clone(), v);
        cur = next;
    }
    let callvalue = match value {
        Some(v) => {
            let (v, next) = interp.eval_slot(&cur, &m.rho, m.loc, v)?;
            cur = next;
            v
        }
        None => Value::int(0),
    };
    let origin = m
        .rho
        .get("origin")
        .cloned()
        .ok_or_else(|| EvalError::Unbound("origin".into()))?;
    callee.insert("caller".into(), Value::Addr(m.loc.unwrap_or(Addr(0))));
    callee.insert("origin".into(), origin);
    callee.insert("callvalue".into(), callvalue);
    Ok((callee, cur))
}
