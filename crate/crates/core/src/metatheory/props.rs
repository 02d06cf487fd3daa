//! The properties checked on each instance.

use std::fmt::Debug;
use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use rand::SeedableRng;

use super::{gen::GenRng, Counts, Instance, Stats, Violation};
use crate::semantics::{apply, Addr, Env, EvalError, EvalResult, Instance as Loc, Interp, MapValue, Mutation, State, TimedState, Timing, Value};
use crate::syntax::*;
use crate::typing::{Checked, Layout, TypingState};
use crate::valuetyping::{env_has_iface, location_has_contract, store_well_typed, value_has_slot};

/// Term categories of the determinism suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Category {
    Expr,
    Ref,
    Mapping,
    Slot,
    Creates,
    Updates,
    Ctor,
    Trans,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::Expr,
        Category::Ref,
        Category::Mapping,
        Category::Slot,
        Category::Creates,
        Category::Updates,
        Category::Ctor,
        Category::Trans,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Expr => "expr",
            Category::Ref => "ref",
            Category::Mapping => "mapping",
            Category::Slot => "slot",
            Category::Creates => "creates",
            Category::Updates => "updates",
            Category::Ctor => "ctor",
            Category::Trans => "trans",
        }
    }
}

/// A type-checked spec with its obligation status.
pub struct Prepared {
    pub spec: Spec,
    pub checked: Checked,
    pub obligations_valid: bool,
    pub mutation: Mutation,
}

impl Prepared {
    pub fn new(spec: Spec, checked: Checked, obligations_valid: bool, mutation: Mutation) -> Prepared {
        Prepared {
            spec,
            checked,
            obligations_valid,
            mutation,
        }
    }

    pub fn interp(&self) -> Interp<'_> {
        Interp::with_mutation(&self.checked.sigma, self.mutation)
    }
}

pub(crate) enum Outcome {
    Pass,
    /// The instance does not meet the premises (trace does not replay, ρ or
    /// ℓ ill typed); nothing was checked.
    Invalid,
    Fail(Violation),
}

fn violation(property: &str, message: String) -> Violation {
    Violation {
        property: property.to_string(),
        message,
    }
}

fn shuffled<T>(rng: &mut GenRng, it: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut v: Vec<T> = it.into_iter().collect();
    v.shuffle(rng);
    v
}

/// Σ with every table rebuilt in a random order.
pub fn permute_sigma(rng: &mut GenRng, sigma: &TypingState) -> TypingState {
    let mut out = TypingState::new();
    for (c, layout) in shuffled(rng, sigma.storage.iter()) {
        let l: Layout = shuffled(rng, layout.iter().map(|(k, v)| (k.clone(), v.clone()))).into_iter().collect();
        out.storage.insert(c.clone(), l);
    }
    for (c, ctor) in shuffled(rng, sigma.cnstr.iter()) {
        out.cnstr.insert(c.clone(), ctor.clone());
    }
    for (c, ts) in shuffled(rng, sigma.trans.iter()) {
        out.trans.insert(c.clone(), shuffled(rng, ts.iter().cloned()));
    }
    out
}

fn permute_value(rng: &mut GenRng, v: &Value) -> Value {
    match v {
        Value::Map(m) => {
            let entries = shuffled(rng, m.entries().map(|(k, v)| (k.clone(), v.clone())));
            let entries: Vec<_> = entries.into_iter().map(|(k, v)| (k, permute_value(rng, &v))).collect();
            Value::Map(MapValue::from_entries(m.key_sort(), permute_value(rng, m.default_value()), entries))
        }
        other => other.clone(),
    }
}

/// `s` rebuilt by inserting locations, fields and mapping entries in a random order.
pub fn permute_state(rng: &mut GenRng, s: &State) -> State {
    let mut out = State::empty();
    for (l, inst) in shuffled(rng, s.iter()) {
        let vars = shuffled(rng, inst.vars.iter())
            .into_iter()
            .map(|(k, v)| (k.clone(), permute_value(rng, v)))
            .collect();
        out.insert(
            l,
            Loc {
                contract: inst.contract.clone(),
                vars,
            },
        );
    }
    out
}

fn permute_env(rng: &mut GenRng, rho: &Env) -> Env {
    shuffled(rng, rho.iter())
        .into_iter()
        .map(|(k, v)| (k.clone(), permute_value(rng, v)))
        .collect()
}

fn fingerprint(s: &State) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    s.hash(&mut h);
    h.finish()
}

/// Sub-terms of one entry point, grouped by how they are evaluated.
#[derive(Default)]
struct Terms<'a> {
    exprs: Vec<(&'a Expr, bool)>,
    refs: Vec<(&'a Ref, bool)>,
    mappings: Vec<&'a MappingExpr>,
    /// Slot expressions with their expected type and the case they occur in.
    slots: Vec<(&'a SlotExpr, Option<SlotType>, Option<usize>)>,
    /// Constructor postconditions, read in the post-state at the new location.
    ctor_posts: Vec<&'a Expr>,
    case: Option<usize>,
}

impl<'a> Terms<'a> {
    fn expr(&mut self, e: &'a Expr, timed: bool) {
        self.exprs.push((e, timed));
        match &e.kind {
            ExprKind::Int(_) | ExprKind::Bool(_) => {}
            ExprKind::Ref(r) | ExprKind::Addr(r) => self.reference(r, timed),
            ExprKind::BinI(_, l, r) | ExprKind::BinB(_, l, r) | ExprKind::Cmp(_, l, r) | ExprKind::Eq(l, r) => {
                self.expr(l, timed);
                self.expr(r, timed);
            }
            ExprKind::Not(x) | ExprKind::InRange(_, x) => self.expr(x, timed),
            ExprKind::Ite(c, t, f) => {
                self.expr(c, timed);
                self.expr(t, timed);
                self.expr(f, timed);
            }
        }
    }

    fn reference(&mut self, r: &'a Ref, timed: bool) {
        self.refs.push((r, timed));
        match &r.kind {
            RefKind::Coerce(i, _) | RefKind::Field(i, _) => self.reference(i, timed),
            RefKind::Index(i, k) => {
                self.reference(i, timed);
                self.expr(k, timed);
            }
            _ => {}
        }
    }

    fn mapping(&mut self, m: &'a MappingExpr) {
        self.mappings.push(m);
        let pairs = match m {
            MappingExpr::Base(e) => return self.expr(e, false),
            MappingExpr::Lit { pairs, .. } => pairs,
            MappingExpr::Upd { base, pairs, .. } => {
                self.reference(base, false);
                pairs
            }
        };
        for (k, v) in pairs {
            self.expr(k, false);
            self.mapping(v);
        }
    }

    fn slot(&mut self, se: &'a SlotExpr, ty: Option<SlotType>) {
        self.slots.push((se, ty, self.case));
        match se {
            SlotExpr::Map(m) => self.mapping(m),
            SlotExpr::Ref(r) => self.reference(r, false),
            SlotExpr::Addr(inner, _) => self.slot(inner, None),
            SlotExpr::New { value, args, .. } => {
                for a in args.iter().chain(value.iter().map(|v| v.as_ref())) {
                    self.slot(a, None);
                }
            }
        }
    }

    fn ctor(c: &'a Constructor) -> Terms<'a> {
        let mut t = Terms::default();
        for e in &c.iff {
            t.expr(e, false);
        }
        for (i, case) in c.cases.iter().enumerate() {
            t.expr(&case.cond, false);
            t.case = Some(i);
            for cr in &case.creates {
                t.slot(&cr.rhs, Some(cr.ty.clone()));
            }
            t.case = None;
        }
        t.ctor_posts = c.ensures.iter().collect();
        t
    }

    fn trans(tr: &'a Transition) -> Terms<'a> {
        let mut t = Terms::default();
        for e in &tr.iff {
            t.expr(e, false);
        }
        for (i, case) in tr.cases.iter().enumerate() {
            t.expr(&case.cond, false);
            t.case = Some(i);
            for u in &case.updates {
                t.reference(&u.target, false);
                t.slot(&u.rhs, u.target.annot.clone());
            }
            t.case = None;
            if let Some(r) = &case.returns {
                t.expr(r, true);
            }
        }
        for e in &tr.ensures {
            t.expr(e, true);
        }
        t
    }
}

/// The slot type of an expression's value, where it is fixed.
fn expr_type(e: &Expr) -> Option<SlotType> {
    let int = || SlotType::base(BaseType::Int(IntType::MathInt));
    let boolean = || SlotType::base(BaseType::Bool);
    match &e.kind {
        ExprKind::Int(_) | ExprKind::BinI(..) => Some(int()),
        ExprKind::Bool(_) | ExprKind::BinB(..) | ExprKind::Cmp(..) | ExprKind::Eq(..) | ExprKind::Not(_) | ExprKind::InRange(..) => {
            Some(boolean())
        }
        ExprKind::Addr(_) => Some(SlotType::base(BaseType::Address)),
        ExprKind::Ref(r) => r.annot.clone(),
        ExprKind::Ite(_, t, f) => {
            let (a, b) = (expr_type(t)?, expr_type(f)?);
            if a == b {
                Some(a)
            } else if a.as_base().and_then(|x| x.as_int()).is_some() && b.as_base().and_then(|x| x.as_int()).is_some() {
                Some(int())
            } else {
                None
            }
        }
    }
}

struct Ctx<'a, 'p> {
    p: &'p Prepared,
    interp: Interp<'p>,
    perm_sigma: &'a TypingState,
    s: &'a State,
    s_perm: &'a State,
    rho: &'a Env,
    rho_perm: &'a Env,
    stats: &'a mut Stats,
}

impl Ctx<'_, '_> {
    fn perm(&self) -> Interp<'_> {
        Interp::with_mutation(self.perm_sigma, self.p.mutation)
    }

    fn det<R: PartialEq + Debug>(&mut self, cat: Category, what: &dyn Fn() -> String, a: R, b: R, c: R) -> Result<(), Violation> {
        let counts = self.stats.determinism.entry(cat.name().to_string()).or_default();
        counts.checked += 1;
        if a != b || a != c {
            counts.failed += 1;
            return Err(violation(
                "determinism",
                format!("{} `{}` evaluated differently: {:?} / {:?} / {:?}", cat.name(), what(), a, b, c),
            ));
        }
        Ok(())
    }

    fn count(c: &mut Counts, ok: bool) {
        c.checked += 1;
        if !ok {
            c.failed += 1;
        }
    }

    fn preserve(&mut self, ok: Result<(), String>, what: &dyn Fn() -> String) -> Result<(), Violation> {
        Self::count(&mut self.stats.preservation, ok.is_ok());
        ok.map_err(|m| violation("preservation", format!("{}: {}", what(), m)))
    }
}

fn typed(sigma: &TypingState, s: &State, v: &Value, ty: &SlotType) -> Result<(), String> {
    value_has_slot(sigma, s, v, ty).map_err(|e| format!("value {} is not typed at {}: {}", v, ty, e))
}

pub(crate) fn check(p: &Prepared, inst: &Instance, stats: &mut Stats) -> Result<(), Violation> {
    match check_outcome(p, inst, stats) {
        Outcome::Fail(v) => Err(v),
        _ => Ok(()),
    }
}

pub(crate) fn check_outcome(p: &Prepared, inst: &Instance, stats: &mut Stats) -> Outcome {
    let interp = p.interp();
    let sigma = &p.checked.sigma;
    let mut s = State::empty();
    for label in &inst.trace {
        match apply(&interp, &s, label) {
            Ok((_, s2)) => s = s2,
            Err(_) => return Outcome::Invalid,
        }
    }
    let contract = match p.checked.spec.contract(&inst.entry.contract) {
        Some(c) => c,
        None => return Outcome::Invalid,
    };
    let iface = match &inst.entry.transition {
        None => &contract.ctor.iface,
        Some(t) => match contract.transition(t) {
            Some(t) => &t.iface,
            None => return Outcome::Invalid,
        },
    };
    if env_has_iface(sigma, &s, &inst.rho, iface).is_err() {
        return Outcome::Invalid;
    }
    if inst.entry.transition.is_some() {
        match inst.entry.loc {
            Some(l) if location_has_contract(sigma, &s, l, &contract.name).is_ok() => {}
            _ => return Outcome::Invalid,
        }
    }
    let mut rng = GenRng::seed_from_u64(inst.perm_seed);
    let perm_sigma = permute_sigma(&mut rng, sigma);
    let s_perm = permute_state(&mut rng, &s);
    let rho_perm = permute_env(&mut rng, &inst.rho);
    let mut ctx = Ctx {
        p,
        interp,
        perm_sigma: &perm_sigma,
        s: &s,
        s_perm: &s_perm,
        rho: &inst.rho,
        rho_perm: &rho_perm,
        stats,
    };
    let result = match &inst.entry.transition {
        None => check_ctor(&mut ctx, contract),
        Some(t) => check_trans(&mut ctx, contract, contract.transition(t).expect("looked up"), inst.entry.loc.expect("checked")),
    };
    match result {
        Ok(()) => Outcome::Pass,
        Err(v) => Outcome::Fail(v),
    }
}

/// Which premises of preservation hold for the entry: the obligations are
/// valid, the precondition holds, and per case whether its condition holds.
/// Arithmetic results are only typed at bounded types under these premises.
struct Premises {
    entry: bool,
    cases: Vec<bool>,
}

impl Premises {
    fn new(ctx: &Ctx, loc: Option<Addr>, iff: &[Expr], conds: &[&Expr]) -> Premises {
        let holds = |e: &Expr| matches!(ctx.interp.eval_bool(ctx.s, ctx.rho, loc, e), Ok(true));
        let entry = ctx.p.obligations_valid && iff.iter().all(holds);
        Premises {
            entry,
            cases: conds.iter().map(|c| entry && holds(c)).collect(),
        }
    }

    fn case(&self, i: Option<usize>) -> bool {
        match i {
            None => self.entry,
            Some(i) => self.cases[i],
        }
    }
}

/// Determinism, frame and preservation for every sub-term. `post` is the
/// post-state for timed terms.
fn check_terms(
    ctx: &mut Ctx,
    terms: &Terms,
    loc: Option<Addr>,
    post: &State,
    post_perm: &State,
    premises: &Premises,
) -> Result<(), Violation> {
    let sigma = &ctx.p.checked.sigma;
    let before = fingerprint(ctx.s);
    let (s, sp, rho, rp) = (ctx.s, ctx.s_perm, ctx.rho, ctx.rho_perm);
    for &(e, timed) in &terms.exprs {
        let (t1, t2) = if timed {
            (TimedState::T(s, post), TimedState::T(sp, post_perm))
        } else {
            (TimedState::U(s), TimedState::U(sp))
        };
        let a = ctx.interp.eval_expr(t1, rho, loc, e);
        let b = ctx.interp.eval_expr(t1, rho, loc, e);
        let c = ctx.perm().eval_expr(t2, rp, loc, e);
        ctx.det(Category::Expr, &|| e.to_string(), a.clone(), b, c)?;
        if let (Ok(v), Some(ty)) = (&a, expr_type(e)) {
            // A timed expression may mix pre and post reads; only base values
            // are checked there.
            if !timed || ty.as_base().is_some() {
                let store = if timed { post } else { s };
                ctx.preserve(typed(sigma, store, v, &ty), &|| format!("expression `{}`", e))?;
            }
        }
    }
    for &(r, timed) in &terms.refs {
        let (t1, t2) = if timed {
            (TimedState::T(s, post), TimedState::T(sp, post_perm))
        } else {
            (TimedState::U(s), TimedState::U(sp))
        };
        let a = ctx.interp.eval_ref(t1, rho, loc, r);
        let b = ctx.interp.eval_ref(t1, rho, loc, r);
        let c = ctx.perm().eval_ref(t2, rp, loc, r);
        ctx.det(Category::Ref, &|| r.to_string(), a.clone(), b, c)?;
        if let (Ok((v, timing)), Some(ty)) = (&a, &r.annot) {
            let store = if *timing == Timing::Post { post } else { s };
            ctx.preserve(typed(sigma, store, v, ty), &|| format!("reference `{}`", r))?;
        }
    }
    for &m in &terms.mappings {
        let a = ctx.interp.eval_mapping(s, rho, loc, m);
        let b = ctx.interp.eval_mapping(s, rho, loc, m);
        let c = ctx.perm().eval_mapping(sp, rp, loc, m);
        ctx.det(Category::Mapping, &|| crate::syntax::pretty::mapping_to_string(m), a, b, c)?;
    }
    for (se, ty, case) in &terms.slots {
        let a = ctx.interp.eval_slot(s, rho, loc, se);
        let b = ctx.interp.eval_slot(s, rho, loc, se);
        let c = ctx.perm().eval_slot(sp, rp, loc, se);
        ctx.det(Category::Slot, &|| se.to_string(), a.clone(), b, c)?;
        if let Ok((v, s2)) = &a {
            if !se.contains_new() {
                let same = s2 == s;
                Ctx::count(&mut ctx.stats.frame, same);
                if !same {
                    return Err(violation("frame", format!("slot expression `{}` changed the state", se)));
                }
            }
            let dom = s.dom_subset_of(s2);
            ctx.preserve(
                if dom { Ok(()) } else { Err("locations disappeared".into()) },
                &|| format!("slot expression `{}`", se),
            )?;
            if let (Some(ty), true) = (ty, premises.case(*case)) {
                ctx.preserve(typed(sigma, s2, v, ty), &|| format!("slot expression `{}`", se))?;
            }
        }
    }
    let after = fingerprint(s);
    let n = (terms.exprs.len() + terms.refs.len()) as u64;
    ctx.stats.frame.checked += n;
    if before != after {
        ctx.stats.frame.failed += 1;
        return Err(violation("frame", "evaluating expressions changed the state".into()));
    }
    Ok(())
}

/// Postconditions of E-Create: a fresh location in a store that extends `s`
/// and, when `typed` premises hold, is well typed with `l` at its contract.
fn check_alloc(ctx: &mut Ctx, what: &str, contract: &str, l: Addr, s2: &State, typed: bool) -> Result<(), Violation> {
    let sigma = &ctx.p.checked.sigma;
    let mut problems = Vec::new();
    if ctx.s.contains(l) {
        problems.push(format!("allocated location {} was already in use", l));
    }
    if !ctx.s.dom_subset_of(s2) {
        problems.push("locations disappeared".to_string());
    }
    if typed {
        if let Err(e) = location_has_contract(sigma, s2, l, contract) {
            problems.push(format!("new location {} is not typed at {}: {}", l, contract, e));
        }
        if let Err(e) = store_well_typed(sigma, s2) {
            problems.push(format!("store is ill typed: {}", e));
        }
    }
    let r = if problems.is_empty() { Ok(()) } else { Err(problems.join("; ")) };
    ctx.preserve(r, &|| what.to_string())
}

fn check_cases(ctx: &mut Ctx, conds: &[&Expr], loc: Option<Addr>, outcome: &EvalResult<impl Debug>) -> Result<(), Violation> {
    let mut hits = Vec::new();
    for (i, c) in conds.iter().enumerate() {
        match ctx.interp.eval_bool(ctx.s, ctx.rho, loc, c) {
            Ok(true) => hits.push(i),
            Ok(false) => {}
            Err(_) => return Ok(()),
        }
    }
    let ok = match (hits.len(), outcome) {
        (0, Err(EvalError::NoCaseMatched)) => true,
        (0, _) => false,
        (1, Err(EvalError::NoCaseMatched | EvalError::MultipleCasesMatched { .. })) => false,
        (1, _) => true,
        (_, Err(EvalError::MultipleCasesMatched { cases })) => *cases == hits,
        _ => false,
    };
    Ctx::count(&mut ctx.stats.case_selection, ok);
    if ok {
        Ok(())
    } else {
        Err(violation(
            "case-selection",
            format!("case conditions {:?} hold, but evaluation gave {:?}", hits, outcome),
        ))
    }
}

fn check_progress(ctx: &mut Ctx, what: &str, r: &Result<(), EvalError>) -> Result<(), Violation> {
    if !ctx.p.obligations_valid || matches!(r, Err(EvalError::PreconditionFailed { .. })) {
        return Ok(());
    }
    let ok = !matches!(r, Err(e) if e.is_type_safety_violation());
    Ctx::count(&mut ctx.stats.progress, ok);
    match r {
        Err(e) if !ok => Err(violation(
            "progress",
            format!("{} failed with {} although its precondition held and all obligations are valid", what, e),
        )),
        _ => Ok(()),
    }
}

fn check_ctor(ctx: &mut Ctx, contract: &Contract) -> Result<(), Violation> {
    let name = &contract.name;
    let ctor = ctx.p.checked.sigma.constructor(name).expect("contract in Σ");
    let terms = Terms::ctor(ctor);
    let a = ctx.interp.eval_ctor(ctx.s, ctx.rho, name, ctor);
    let b = ctx.interp.eval_ctor(ctx.s, ctx.rho, name, ctor);
    let perm_ctor = ctx.perm_sigma.constructor(name).expect("contract in permuted Σ");
    let c = ctx.perm().eval_ctor(ctx.s_perm, ctx.rho_perm, name, perm_ctor);
    ctx.det(Category::Ctor, &|| format!("{}.constructor", name), a.clone(), b, c)?;

    let conds: Vec<&Expr> = ctor.cases.iter().map(|c| &c.cond).collect();
    let premises = Premises::new(ctx, None, &ctor.iff, &conds);
    let (s, sp) = (ctx.s.clone(), ctx.s_perm.clone());
    check_terms(ctx, &terms, None, &s, &sp, &premises)?;

    for (i, case) in ctor.cases.iter().enumerate() {
        let x = ctx.interp.eval_creates(ctx.s, ctx.rho, name, &case.creates);
        let y = ctx.interp.eval_creates(ctx.s, ctx.rho, name, &case.creates);
        let z = ctx.perm().eval_creates(ctx.s_perm, ctx.rho_perm, name, &case.creates);
        ctx.det(Category::Creates, &|| format!("creates of {}", name), x.clone(), y, z)?;
        if let Ok((l, s2)) = &x {
            check_alloc(ctx, &format!("creates of {}", name), name, *l, s2, premises.cases[i])?;
        }
    }

    let direct = ctx.interp.eval_ctor_cases(ctx.s, ctx.rho, name, ctor);
    check_cases(ctx, &conds, None, &direct)?;

    check_progress(ctx, &format!("{}.constructor", name), &a.as_ref().map(|_| ()).map_err(Clone::clone))?;

    if let Ok((l, s2)) = &a {
        let valid = ctx.p.obligations_valid;
        check_alloc(ctx, &format!("{}.constructor", name), name, *l, s2, valid)?;
        let sigma = &ctx.p.checked.sigma;
        let r = env_has_iface(sigma, s2, ctx.rho, &ctor.iface).map_err(|e| format!("ρ is no longer typed: {}", e));
        ctx.preserve(r, &|| format!("{}.constructor", name))?;
        for post in &terms.ctor_posts {
            let x = ctx.interp.eval_expr(TimedState::U(s2), ctx.rho, Some(*l), post);
            let y = ctx.interp.eval_expr(TimedState::U(s2), ctx.rho, Some(*l), post);
            let z = ctx.perm().eval_expr(TimedState::U(s2), ctx.rho_perm, Some(*l), post);
            ctx.det(Category::Expr, &|| post.to_string(), x, y, z)?;
        }
    }
    Ok(())
}

fn check_trans(ctx: &mut Ctx, contract: &Contract, _typed: &Transition, l: Addr) -> Result<(), Violation> {
    let name = &contract.name;
    let sigma = &ctx.p.checked.sigma;
    let t = sigma.transition(name, &_typed.name).expect("transition in Σ");
    let what = format!("{}.{}", name, t.name);
    let a = ctx.interp.eval_trans(ctx.s, ctx.rho, l, t);
    let b = ctx.interp.eval_trans(ctx.s, ctx.rho, l, t);
    let perm_t = ctx.perm_sigma.transition(name, &t.name).expect("transition in permuted Σ");
    let c = ctx.perm().eval_trans(ctx.s_perm, ctx.rho_perm, l, perm_t);
    ctx.det(Category::Trans, &|| what.clone(), a.clone(), b, c.clone())?;

    let terms = Terms::trans(t);
    let (post, post_perm) = match (&a, &c) {
        (Ok((_, s2)), Ok((_, s2p))) => (s2.clone(), s2p.clone()),
        _ => (ctx.s.clone(), ctx.s_perm.clone()),
    };
    let conds: Vec<&Expr> = t.cases.iter().map(|c| &c.cond).collect();
    let premises = Premises::new(ctx, Some(l), &t.iff, &conds);
    check_terms(ctx, &terms, Some(l), &post, &post_perm, &premises)?;

    for (i, case) in t.cases.iter().enumerate() {
        let x = ctx.interp.eval_updates(ctx.s, ctx.rho, Some(l), &case.updates);
        let y = ctx.interp.eval_updates(ctx.s, ctx.rho, Some(l), &case.updates);
        let z = ctx.perm().eval_updates(ctx.s_perm, ctx.rho_perm, Some(l), &case.updates);
        ctx.det(Category::Updates, &|| format!("updates of {}", what), x.clone(), y, z)?;

        // E-Updates: every right-hand side is evaluated before any insertion.
        let oracle = two_phase(&ctx.interp, ctx.s, ctx.rho, l, &case.updates);
        let same = match (&x, &oracle) {
            (Ok(p), Ok(q)) => p == q,
            (Err(_), Err(_)) => true,
            _ => false,
        };
        Ctx::count(&mut ctx.stats.two_phase_updates, same);
        if !same {
            return Err(violation(
                "two-phase-updates",
                format!("updates of {} disagree with evaluating all right-hand sides first", what),
            ));
        }
        if let Ok(s2) = &x {
            let mut problems = Vec::new();
            if !ctx.s.dom_subset_of(s2) {
                problems.push("locations disappeared".to_string());
            }
            if premises.cases[i] {
                if let Err(e) = store_well_typed(sigma, s2) {
                    problems.push(format!("store is ill typed: {}", e));
                }
            }
            let r = if problems.is_empty() { Ok(()) } else { Err(problems.join("; ")) };
            ctx.preserve(r, &|| format!("updates of {}", what))?;
        }
    }

    let direct = ctx.interp.eval_trans_cases(ctx.s, ctx.rho, l, t);
    check_cases(ctx, &conds, Some(l), &direct)?;

    check_progress(ctx, &what, &a.as_ref().map(|_| ()).map_err(Clone::clone))?;

    if let Ok((v, s2)) = &a {
        let mut problems = Vec::new();
        if let Err(e) = env_has_iface(sigma, s2, ctx.rho, &t.iface) {
            problems.push(format!("ρ is no longer typed: {}", e));
        }
        if !ctx.s.dom_subset_of(s2) {
            problems.push("locations disappeared".to_string());
        }
        if ctx.p.obligations_valid {
            if let Err(e) = location_has_contract(sigma, s2, l, name) {
                problems.push(format!("{} is no longer typed at {}: {}", l, name, e));
            }
            if let Err(e) = store_well_typed(sigma, s2) {
                problems.push(format!("store is ill typed: {}", e));
            }
            match &t.ret {
                Some(ty) => {
                    if let Err(e) = typed(sigma, s2, v, &SlotType::from_abi(ty)) {
                        problems.push(format!("return {}", e));
                    }
                }
                None => {
                    if *v != Value::Unit {
                        problems.push(format!("returned {} without a return type", v));
                    }
                }
            }
        }
        let r = if problems.is_empty() { Ok(()) } else { Err(problems.join("; ")) };
        ctx.preserve(r, &|| what.clone())?;
    }
    Ok(())
}

fn two_phase(interp: &Interp, s: &State, rho: &Env, l: Addr, updates: &[Update]) -> EvalResult<State> {
    let mut cur = s.clone();
    let mut values = Vec::new();
    for u in updates {
        let (v, next) = interp.eval_slot(&cur, rho, Some(l), &u.rhs)?;
        values.push(v);
        cur = next;
    }
    for (u, v) in updates.iter().zip(values) {
        cur = interp.insert(&cur, rho, Some(l), &u.target, v)?;
    }
    Ok(cur)
}
