//! Seeded generators: specs that mostly type check, well-typed environments,
//! and states reached by random walks from the empty state.
//!
//! Specs are built as untyped syntax and go through the real checker; the
//! generator only aims for a high acceptance rate. Arithmetic at bounded
//! types is usually guarded by an `inrange` precondition so that most
//! obligations hold.

use num_bigint::{BigInt, RandBigInt};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::entailment::BoundsConfig;
use crate::semantics::{apply, Addr, Env, Interp, State, StepLabel, Value};
use crate::syntax::*;
use crate::typing::TypingState;
use crate::valuetyping;

pub type GenRng = ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub max_contracts: usize,
    pub max_fields: usize,
    pub max_transitions: usize,
    pub max_params: usize,
    pub expr_depth: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_contracts: 3,
            max_fields: 4,
            max_transitions: 4,
            max_params: 2,
            expr_depth: 2,
        }
    }
}

fn int_types() -> [IntType; 5] {
    [
        IntType::uint(8),
        IntType::uint(16),
        IntType::uint(256),
        IntType::sint(8),
        IntType::sint(256),
    ]
}

/// What the generator knows about an already generated contract.
#[derive(Debug, Clone)]
struct Info {
    name: String,
    fields: Vec<(String, SlotType)>,
    iface: Vec<Param>,
    payable: bool,
    /// No `address<_>` parameters, so `new` can always be written.
    newable: bool,
}

struct Scope<'a> {
    params: &'a [Param],
    /// Storage of the current contract, when it may be read.
    fields: &'a [(String, SlotType)],
    done: &'a [Info],
    timed: bool,
    has_loc: bool,
    guards: Vec<Expr>,
}

impl Scope<'_> {
    fn info(&self, c: &str) -> Option<&Info> {
        self.done.iter().find(|i| i.name == c)
    }

    fn storage(&self, x: &str, rng: &mut GenRng) -> Ref {
        if self.timed {
            if rng.gen_bool(0.7) {
                Ref::pre(x)
            } else {
                Ref::post(x)
            }
        } else {
            Ref::var(x)
        }
    }
}

fn literal(rng: &mut GenRng, t: IntType) -> Expr {
    let lo = t.min().unwrap_or_else(|| BigInt::from(-300));
    let hi = t.max().unwrap_or_else(|| BigInt::from(300));
    let n = match rng.gen_range(0..6) {
        0 => lo,
        1 => hi,
        2 => BigInt::from(0),
        _ => BigInt::from(rng.gen_range(0..=10)),
    };
    let n = n.clamp(
        t.min().unwrap_or_else(|| BigInt::from(-300)),
        t.max().unwrap_or_else(|| BigInt::from(300)),
    );
    Expr::int(n)
}

/// Readable references, with their slot types.
fn sources(rng: &mut GenRng, sc: &mut Scope, depth: u32) -> Vec<(Ref, SlotType)> {
    let mut out = Vec::new();
    for p in sc.params {
        out.push((Ref::var(&p.name), SlotType::from_abi(&p.ty)));
        if let AbiType::ContractAddr(c) = &p.ty {
            if let Some(info) = sc.info(c) {
                for (f, ty) in &info.fields {
                    if ty.as_base().is_some() {
                        out.push((Ref::var(&p.name).coerce(c).field(f), ty.clone()));
                    }
                }
            }
        }
    }
    // Postconditions and returns cannot read the environment.
    if !sc.timed {
        for ev in [EnvVar::Caller, EnvVar::Origin, EnvVar::Callvalue] {
            let ty = match ev {
                EnvVar::Callvalue => SlotType::base(BaseType::Int(IntType::uint(256))),
                _ => SlotType::base(BaseType::Address),
            };
            out.push((Ref::env(ev), ty));
        }
    }
    if sc.has_loc && !sc.timed {
        out.push((Ref::env(EnvVar::This), SlotType::base(BaseType::Address)));
    }
    let fields: Vec<(String, SlotType)> = sc.fields.to_vec();
    for (x, ty) in &fields {
        match ty {
            SlotType::Mapping(MappingType::Map(k, v)) => {
                if depth == 0 || (sc.timed && needs_addr_key(k, v) && !timed_addr_available(sc)) {
                    continue;
                }
                let key = gen_base(rng, sc, *k, 0);
                let mut r = sc.storage(x, rng).index(key);
                let mut vt = (**v).clone();
                while let MappingType::Map(k2, v2) = vt {
                    r = r.index(gen_base(rng, sc, k2, 0));
                    vt = *v2;
                }
                out.push((r, SlotType::Mapping(vt)));
            }
            SlotType::Contract(c) | SlotType::Abi(AbiType::ContractAddr(c)) => {
                let is_addr = ty.as_contract_addr().is_some();
                if is_addr {
                    out.push((sc.storage(x, rng), ty.clone()));
                }
                let fields = sc.info(c).map(|i| i.fields.clone()).unwrap_or_default();
                for (f, fty) in fields {
                    if fty.as_base().is_some() {
                        let base = sc.storage(x, rng);
                        let base = if is_addr { base.coerce(c) } else { base };
                        out.push((base.field(&f), fty));
                    }
                }
            }
            _ => out.push((sc.storage(x, rng), ty.clone())),
        }
    }
    out
}

fn needs_addr_key(k: &BaseType, v: &MappingType) -> bool {
    let mut any = *k == BaseType::Address;
    let mut vt = v;
    while let MappingType::Map(k2, v2) = vt {
        any |= *k2 == BaseType::Address;
        vt = v2;
    }
    any
}

/// Whether an address can be read without the environment.
fn timed_addr_available(sc: &Scope) -> bool {
    sc.params.iter().any(|p| addrish(&SlotType::from_abi(&p.ty))) || sc.fields.iter().any(|(_, t)| addrish(t))
}

fn pick_source(rng: &mut GenRng, sc: &mut Scope, depth: u32, want: impl Fn(&SlotType) -> bool) -> Option<Ref> {
    let all = sources(rng, sc, depth);
    let ok: Vec<Ref> = all.into_iter().filter(|(_, t)| want(t)).map(|(r, _)| r).collect();
    ok.choose(rng).cloned()
}

fn gen_int(rng: &mut GenRng, sc: &mut Scope, target: IntType, depth: u32) -> Expr {
    let roll = rng.gen_range(0..10);
    let arithmetic_ok = !sc.timed || target == IntType::MathInt;
    if depth > 0 && roll < 3 && arithmetic_ok {
        let op = *[IntOp::Add, IntOp::Add, IntOp::Sub, IntOp::Mul, IntOp::Div, IntOp::Mod, IntOp::Exp]
            .choose(rng)
            .unwrap();
        let l = gen_int(rng, sc, IntType::MathInt, depth - 1);
        let r = if op == IntOp::Exp {
            Expr::int(rng.gen_range(0..=3))
        } else {
            gen_int(rng, sc, IntType::MathInt, depth - 1)
        };
        let e = Expr::bin_i(op, l, r);
        if target != IntType::MathInt && rng.gen_bool(0.98) {
            sc.guards.push(Expr::in_range(target, e.clone()));
        }
        return e;
    }
    if depth > 0 && roll == 3 {
        let c = gen_bool(rng, sc, depth - 1);
        let t = gen_int(rng, sc, target, depth - 1);
        let f = gen_int(rng, sc, target, depth - 1);
        return Expr::ite(c, t, f);
    }
    if roll < 8 {
        let fits = |t: &SlotType| matches!(t.as_base(), Some(BaseType::Int(i)) if i.fits_in(target));
        if let Some(r) = pick_source(rng, sc, depth, fits) {
            return Expr::reference(r);
        }
    }
    literal(rng, target)
}

fn addrish(t: &SlotType) -> bool {
    matches!(t.as_base(), Some(BaseType::Address)) || t.as_contract_addr().is_some()
}

/// An address expression; `None` in a timed scope without address slots.
fn gen_addr(rng: &mut GenRng, sc: &mut Scope, depth: u32) -> Option<Expr> {
    match pick_source(rng, sc, depth, addrish) {
        Some(r) => Some(Expr::reference(r)),
        None if sc.timed => None,
        None => Some(Expr::reference(Ref::env(EnvVar::Caller))),
    }
}

fn gen_bool(rng: &mut GenRng, sc: &mut Scope, depth: u32) -> Expr {
    let roll = if depth == 0 { rng.gen_range(0..4) } else { rng.gen_range(0..12) };
    match roll {
        0 => Expr::bool(rng.gen_bool(0.5)),
        1..=3 => match pick_source(rng, sc, depth, |t| t.as_base() == Some(BaseType::Bool)) {
            Some(r) => Expr::reference(r),
            None => Expr::bool(rng.gen_bool(0.5)),
        },
        4..=6 => {
            let op = *[CmpOp::Lt, CmpOp::Le, CmpOp::Ge, CmpOp::Gt].choose(rng).unwrap();
            let l = gen_int(rng, sc, IntType::MathInt, depth - 1);
            let r = gen_int(rng, sc, IntType::MathInt, depth - 1);
            Expr::cmp(op, l, r)
        }
        7 => {
            let l = gen_int(rng, sc, IntType::MathInt, depth - 1);
            let r = gen_int(rng, sc, IntType::MathInt, depth - 1);
            Expr::eq(l, r)
        }
        8 => match (gen_addr(rng, sc, depth - 1), gen_addr(rng, sc, depth - 1)) {
            (Some(l), Some(r)) => Expr::eq(l, r),
            _ => Expr::bool(true),
        },
        9 => Expr::not(gen_bool(rng, sc, depth - 1)),
        10 => {
            let op = *[BoolOp::And, BoolOp::Or, BoolOp::Implies].choose(rng).unwrap();
            let l = gen_bool(rng, sc, depth - 1);
            let r = gen_bool(rng, sc, depth - 1);
            Expr::bin_b(op, l, r)
        }
        _ => {
            let t = *int_types().choose(rng).unwrap();
            Expr::in_range(t, gen_int(rng, sc, IntType::MathInt, depth - 1))
        }
    }
}

fn gen_base(rng: &mut GenRng, sc: &mut Scope, b: BaseType, depth: u32) -> Expr {
    match b {
        BaseType::Int(t) => gen_int(rng, sc, t, depth),
        BaseType::Bool => gen_bool(rng, sc, depth),
        BaseType::Address => gen_addr(rng, sc, depth).expect("address slots exist in this scope"),
    }
}

fn gen_mapping(rng: &mut GenRng, sc: &mut Scope, m: &MappingType, depth: u32) -> MappingExpr {
    match m {
        MappingType::Base(b) => MappingExpr::Base(gen_base(rng, sc, *b, depth)),
        MappingType::Map(k, v) => {
            let n = rng.gen_range(0..=2);
            let pairs = (0..n)
                .map(|_| (gen_base(rng, sc, *k, 0), gen_mapping(rng, sc, v, depth.saturating_sub(1))))
                .collect();
            MappingExpr::lit(pairs)
        }
    }
}

/// `m[k => v]`, or `m[k => m[k][k2 => v]]` for nested mappings.
fn gen_mapping_update(rng: &mut GenRng, sc: &mut Scope, base: Ref, m: &MappingType, depth: u32) -> MappingExpr {
    match m {
        MappingType::Map(k, v) => {
            let key = gen_base(rng, sc, *k, 0);
            let value = match &**v {
                MappingType::Base(b) => MappingExpr::Base(gen_base(rng, sc, *b, depth)),
                inner => gen_mapping_update(rng, sc, base.clone().index(key.clone()), inner, depth),
            };
            MappingExpr::upd(base, vec![(key, value)])
        }
        MappingType::Base(b) => MappingExpr::Base(gen_base(rng, sc, *b, depth)),
    }
}

fn gen_new(rng: &mut GenRng, sc: &mut Scope, c: &str) -> Option<SlotExpr> {
    let info = sc.info(c)?.clone();
    if !info.newable {
        return None;
    }
    let mut args = Vec::new();
    for p in &info.iface {
        let e = match &p.ty {
            AbiType::Base(BaseType::Int(t)) => {
                if rng.gen_bool(0.2) {
                    gen_int(rng, sc, *t, 0)
                } else {
                    let n = BigInt::from(rng.gen_range(1..=5)).min((*t).max().unwrap_or_else(|| BigInt::from(5)));
                    Expr::int(n)
                }
            }
            AbiType::Base(b) => gen_base(rng, sc, *b, 0),
            AbiType::ContractAddr(_) => return None,
        };
        args.push(SlotExpr::expr(e));
    }
    let value = info
        .payable
        .then(|| SlotExpr::expr(Expr::int(rng.gen_range(0..=3))));
    Some(SlotExpr::new_contract(c, value, args))
}

/// A right-hand side for a slot of type `ty`. `base` is the slot itself,
/// when an update may refer to its old value.
fn gen_slot(rng: &mut GenRng, sc: &mut Scope, ty: &SlotType, base: Option<Ref>, depth: u32) -> Option<SlotExpr> {
    match ty {
        SlotType::Contract(c) => {
            if rng.gen_bool(0.3) {
                let src = pick_source(rng, sc, depth, |t| t.as_contract_addr() == Some(c.as_str()));
                if let Some(r) = src {
                    if sc.params.iter().any(|p| Some(p.name.as_str()) == r.root_name()) {
                        return Some(SlotExpr::Ref(r.coerce(c)));
                    }
                }
            }
            gen_new(rng, sc, c)
        }
        SlotType::Abi(AbiType::ContractAddr(c)) => {
            if rng.gen_bool(0.4) {
                let p = sc
                    .params
                    .iter()
                    .find(|p| p.ty == AbiType::ContractAddr(c.clone()))
                    .map(|p| p.name.clone());
                if let Some(p) = p {
                    return Some(SlotExpr::addr(SlotExpr::Ref(Ref::var(&p).coerce(c))));
                }
            }
            gen_new(rng, sc, c).map(SlotExpr::addr)
        }
        other => {
            let m = other.as_mapping().expect("mapping or base");
            let me = match (&m, base) {
                (MappingType::Map(..), Some(b)) if rng.gen_bool(0.7) => gen_mapping_update(rng, sc, b, &m, depth),
                _ => gen_mapping(rng, sc, &m, depth),
            };
            Some(match me {
                MappingExpr::Base(e) => SlotExpr::expr(e),
                me => SlotExpr::Map(me),
            })
        }
    }
}

fn gen_params(rng: &mut GenRng, prefix: &str, done: &[Info], max: usize) -> Vec<Param> {
    let n = rng.gen_range(0..=max);
    (0..n)
        .map(|i| {
            let ty = match rng.gen_range(0..8) {
                0..=3 => AbiType::Base(BaseType::Int(*int_types().choose(rng).unwrap())),
                4 => AbiType::Base(BaseType::Bool),
                5 | 6 => AbiType::Base(BaseType::Address),
                _ => match done.choose(rng) {
                    Some(info) => AbiType::ContractAddr(info.name.clone()),
                    None => AbiType::Base(BaseType::Bool),
                },
            };
            Param::new(&format!("{}{}", prefix, i), ty)
        })
        .collect()
}

fn gen_field_type(rng: &mut GenRng, done: &[Info]) -> SlotType {
    let int = |rng: &mut GenRng| BaseType::Int(*int_types().choose(rng).unwrap());
    match rng.gen_range(0..12) {
        0..=3 => SlotType::base(int(rng)),
        4 => SlotType::base(BaseType::Bool),
        5 => SlotType::base(BaseType::Address),
        6 => SlotType::Mapping(MappingType::map(BaseType::Int(IntType::uint(8)), MappingType::Base(int(rng)))),
        7 => SlotType::Mapping(MappingType::map(BaseType::Address, MappingType::Base(BaseType::Int(IntType::uint(256))))),
        8 => SlotType::Mapping(MappingType::map(
            BaseType::Address,
            MappingType::map(BaseType::Int(IntType::uint(8)), MappingType::Base(BaseType::Bool)),
        )),
        _ => {
            let newable: Vec<&Info> = done.iter().filter(|i| i.newable).collect();
            match newable.choose(rng) {
                Some(info) if rng.gen_bool(0.6) => SlotType::Contract(info.name.clone()),
                Some(info) => SlotType::Abi(AbiType::ContractAddr(info.name.clone())),
                None => SlotType::base(int(rng)),
            }
        }
    }
}

/// Swaps storage reads for `pre(...)` reads so an untimed expression can be
/// restated in a postcondition.
fn to_timed_ref(r: &Ref, fields: &[(String, SlotType)]) -> Ref {
    let is_field = |x: &str| fields.iter().any(|(f, _)| f == x);
    let kind = match &r.kind {
        RefKind::Var(x) if is_field(x) => RefKind::Pre(x.clone()),
        RefKind::Coerce(i, c) => RefKind::Coerce(Box::new(to_timed_ref(i, fields)), c.clone()),
        RefKind::Field(i, x) => RefKind::Field(Box::new(to_timed_ref(i, fields)), x.clone()),
        RefKind::Index(i, k) => RefKind::Index(Box::new(to_timed_ref(i, fields)), Box::new(to_timed(k, fields))),
        other => other.clone(),
    };
    Ref::new(kind, r.span)
}

fn to_timed(e: &Expr, fields: &[(String, SlotType)]) -> Expr {
    let b = |x: &Expr| Box::new(to_timed(x, fields));
    let kind = match &e.kind {
        ExprKind::Ref(r) => ExprKind::Ref(to_timed_ref(r, fields)),
        ExprKind::Addr(r) => ExprKind::Addr(to_timed_ref(r, fields)),
        ExprKind::BinI(op, l, r) => ExprKind::BinI(*op, b(l), b(r)),
        ExprKind::BinB(op, l, r) => ExprKind::BinB(*op, b(l), b(r)),
        ExprKind::Cmp(op, l, r) => ExprKind::Cmp(*op, b(l), b(r)),
        ExprKind::Eq(l, r) => ExprKind::Eq(b(l), b(r)),
        ExprKind::Not(x) => ExprKind::Not(b(x)),
        ExprKind::InRange(t, x) => ExprKind::InRange(*t, b(x)),
        ExprKind::Ite(c, t, f) => ExprKind::Ite(b(c), b(t), b(f)),
        other => other.clone(),
    };
    Expr::new(kind, e.span)
}

fn reads_env(e: &Expr) -> bool {
    fn r(x: &Ref) -> bool {
        match &x.kind {
            RefKind::Env(_) => true,
            RefKind::Coerce(i, _) | RefKind::Field(i, _) => r(i),
            RefKind::Index(i, k) => r(i) || reads_env(k),
            _ => false,
        }
    }
    match &e.kind {
        ExprKind::Int(_) | ExprKind::Bool(_) => false,
        ExprKind::Ref(x) | ExprKind::Addr(x) => r(x),
        ExprKind::BinI(_, a, b) | ExprKind::BinB(_, a, b) | ExprKind::Cmp(_, a, b) | ExprKind::Eq(a, b) => {
            reads_env(a) || reads_env(b)
        }
        ExprKind::Not(a) | ExprKind::InRange(_, a) => reads_env(a),
        ExprKind::Ite(c, t, f) => reads_env(c) || reads_env(t) || reads_env(f),
    }
}

fn base_rhs(se: &SlotExpr) -> Option<Expr> {
    match se {
        SlotExpr::Map(MappingExpr::Base(e)) => Some(e.clone()),
        SlotExpr::Ref(r) => Some(Expr::reference(r.clone())),
        _ => None,
    }
}

/// Two cases `c` / `not c` most of the time, occasionally two unrelated
/// conditions that may overlap or leave a gap.
fn gen_conds(rng: &mut GenRng, sc: &mut Scope, depth: u32) -> Vec<Expr> {
    let roll = rng.gen_range(0..60);
    if roll < 42 {
        return vec![Expr::tt()];
    }
    let c = gen_bool(rng, sc, depth);
    if roll < 59 {
        vec![c.clone(), Expr::not(c)]
    } else {
        vec![c, gen_bool(rng, sc, depth)]
    }
}

fn gen_contract(rng: &mut GenRng, cfg: &GenConfig, idx: usize, done: &[Info]) -> (Contract, Info) {
    let name = format!("C{}", idx);
    let mut fields: Vec<(String, SlotType)> = (0..rng.gen_range(1..=cfg.max_fields))
        .map(|i| (format!("f{}", i), gen_field_type(rng, done)))
        .collect();
    fields.push(("balance".to_string(), SlotType::base(BaseType::Int(IntType::uint(256)))));

    // constructor
    let iface = gen_params(rng, "p", done, cfg.max_params);
    let payable = rng.gen_bool(0.2);
    let mut sc = Scope {
        params: &iface,
        fields: &[],
        done,
        timed: false,
        has_loc: false,
        guards: Vec::new(),
    };
    let mut iff = Vec::new();
    for p in &iface {
        if let AbiType::Base(BaseType::Int(t)) = p.ty {
            if t.max().is_some_and(|m| m > BigInt::from(0)) && rng.gen_bool(0.3) {
                iff.push(Expr::cmp(CmpOp::Gt, Expr::var(&p.name), Expr::int(0)));
            }
        }
    }
    let conds = gen_conds(rng, &mut sc, 1);
    let single = conds.len() == 1;
    let mut cases = Vec::new();
    let mut ensures = Vec::new();
    for cond in conds {
        let mut creates = Vec::new();
        for (x, ty) in &fields {
            let rhs = if x == "balance" {
                if payable {
                    SlotExpr::expr(Expr::reference(Ref::env(EnvVar::Callvalue)))
                } else {
                    SlotExpr::expr(Expr::int(0))
                }
            } else {
                match gen_slot(rng, &mut sc, ty, None, cfg.expr_depth) {
                    Some(r) => r,
                    None => SlotExpr::expr(Expr::int(0)),
                }
            };
            if single && ty.as_base().is_some() && rng.gen_bool(0.3) {
                if let Some(e) = base_rhs(&rhs).filter(|e| !reads_env(e)) {
                    ensures.push(Expr::eq(Expr::var(x), e));
                }
            }
            creates.push(Create {
                ty: ty.clone(),
                name: x.clone(),
                rhs,
                span: Default::default(),
            });
        }
        cases.push(CtorCase {
            cond,
            creates,
            span: Default::default(),
        });
    }
    iff.append(&mut sc.guards);
    if rng.gen_bool(0.15) {
        iff.push(gen_bool(rng, &mut sc, 1));
        sc.guards.clear();
    }
    let ctor = Constructor {
        iface: iface.clone(),
        payable,
        iff,
        cases,
        ensures,
        span: Default::default(),
    };
    // Only constructors without a precondition are created by `new`, so the
    // creation obligation stays dischargeable.
    let newable = ctor.iff.is_empty() && iface.iter().all(|p| matches!(p.ty, AbiType::Base(_)));
    let info = Info {
        name: name.clone(),
        fields: fields.clone(),
        iface,
        payable,
        newable,
    };

    // transitions
    let mut transitions = Vec::new();
    for ti in 0..rng.gen_range(1..=cfg.max_transitions) {
        transitions.push(gen_transition(rng, cfg, &format!("t{}", ti), &fields, done));
    }

    let mut invariants = Vec::new();
    for (x, ty) in &fields {
        if matches!(ty.as_base(), Some(BaseType::Int(IntType::Unsigned(_)))) && rng.gen_bool(0.2) {
            invariants.push(Expr::cmp(CmpOp::Ge, Expr::var(x), Expr::int(0)));
        }
    }
    let contract = Contract {
        name,
        ctor,
        transitions,
        invariants,
        span: Default::default(),
    };
    (contract, info)
}

fn gen_transition(
    rng: &mut GenRng,
    cfg: &GenConfig,
    name: &str,
    fields: &[(String, SlotType)],
    done: &[Info],
) -> Transition {
    let iface = gen_params(rng, "q", done, cfg.max_params);
    let iface_has_addr = iface.iter().any(|p| addrish(&SlotType::from_abi(&p.ty)));
    let payable = rng.gen_bool(0.2);
    let ret = if rng.gen_bool(0.5) {
        None
    } else {
        Some(match rng.gen_range(0..4) {
            0 | 1 => AbiType::Base(BaseType::Int(*int_types().choose(rng).unwrap())),
            2 => AbiType::Base(BaseType::Bool),
            _ if fields.iter().any(|(_, t)| addrish(t)) || iface_has_addr => AbiType::Base(BaseType::Address),
            _ => AbiType::Base(BaseType::Bool),
        })
    };
    let mut sc = Scope {
        params: &iface,
        fields,
        done,
        timed: false,
        has_loc: true,
        guards: Vec::new(),
    };

    // Update targets: own fields, and base fields of contract-typed fields.
    let mut targets: Vec<(Ref, SlotType)> = fields.iter().map(|(x, t)| (Ref::var(x), t.clone())).collect();
    for (x, t) in fields {
        if let SlotType::Contract(c) = t {
            if let Some(info) = done.iter().find(|i| &i.name == c) {
                for (f, ft) in &info.fields {
                    if ft.as_base().is_some() {
                        targets.push((Ref::var(x).field(f), ft.clone()));
                    }
                }
            }
        }
    }

    let conds = gen_conds(rng, &mut sc, 1);
    let single = conds.len() == 1;
    let mut cases = Vec::new();
    let mut ensures = Vec::new();
    for cond in conds {
        let mut chosen: Vec<(Ref, SlotType)> = targets
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        // Never update a contract field and one of its fields together.
        let roots: Vec<String> = chosen
            .iter()
            .filter(|(r, _)| matches!(r.kind, RefKind::Var(_)))
            .filter_map(|(r, _)| r.root_name().map(str::to_string))
            .collect();
        chosen.retain(|(r, _)| matches!(r.kind, RefKind::Var(_)) || !roots.iter().any(|x| Some(x.as_str()) == r.root_name()));
        let mut updates = Vec::new();
        for (target, ty) in chosen {
            let base = matches!(target.kind, RefKind::Var(_)).then(|| target.clone());
            let rhs = match gen_slot(rng, &mut sc, &ty, base, cfg.expr_depth) {
                Some(r) => r,
                None => continue,
            };
            if single && ty.as_base().is_some() && rng.gen_bool(0.4) {
                if let (RefKind::Var(x), Some(e)) = (&target.kind, base_rhs(&rhs).filter(|e| !reads_env(e))) {
                    ensures.push(Expr::eq(
                        Expr::reference(Ref::post(x)),
                        to_timed(&e, fields),
                    ));
                }
            }
            updates.push(Update {
                target,
                rhs,
                span: Default::default(),
            });
        }
        let returns = ret.as_ref().map(|r| {
            let mut tsc = Scope {
                params: &iface,
                fields,
                done,
                timed: true,
                has_loc: true,
                guards: Vec::new(),
            };
            match r {
                AbiType::Base(b) => gen_base(rng, &mut tsc, *b, 1),
                AbiType::ContractAddr(_) => unreachable!("not generated"),
            }
        });
        cases.push(TransCase {
            cond,
            updates,
            returns,
            span: Default::default(),
        });
    }
    let mut iff = std::mem::take(&mut sc.guards);
    if rng.gen_bool(0.3) {
        iff.push(gen_bool(rng, &mut sc, 1));
        iff.append(&mut sc.guards);
    }
    Transition {
        name: name.to_string(),
        iface,
        payable,
        ret,
        iff,
        cases,
        ensures,
        span: Default::default(),
    }
}

/// A random spec of 1 to `max_contracts` contracts. Later contracts may refer
/// to earlier ones, never the reverse.
pub fn gen_spec(rng: &mut GenRng, cfg: &GenConfig) -> Spec {
    let n = rng.gen_range(1..=cfg.max_contracts);
    let mut done = Vec::new();
    let mut contracts = Vec::new();
    for i in 0..n {
        let (c, info) = gen_contract(rng, cfg, i, &done);
        contracts.push(c);
        done.push(info);
    }
    Spec { contracts }
}

pub fn gen_int_value(rng: &mut GenRng, t: IntType) -> BigInt {
    let lo = t.min().unwrap_or_else(|| -(BigInt::from(1) << 256usize));
    let hi = t.max().unwrap_or_else(|| BigInt::from(1) << 256usize);
    let n = match rng.gen_range(0..8) {
        0 => lo.clone(),
        1 => hi.clone(),
        2 => BigInt::from(0),
        3 => BigInt::from(1),
        4 => rng.gen_bigint_range(&lo, &(hi.clone() + 1)),
        _ => BigInt::from(rng.gen_range(-3..=12)),
    };
    n.clamp(lo, hi)
}

fn gen_address(rng: &mut GenRng, s: &State) -> Addr {
    let mut pool: Vec<Addr> = s.addresses().collect();
    pool.push(s.fresh());
    pool.push(Addr(rng.gen_range(0..4)));
    *pool.choose(rng).unwrap()
}

/// A random ρ with `Σ ⊢ ρ :_s I`, or `None` when some `address_A`
/// parameter has no candidate location in `s`.
pub fn gen_env(rng: &mut GenRng, sigma: &TypingState, s: &State, iface: &[Param]) -> Option<Env> {
    let mut rho = Env::new();
    for p in iface {
        let v = match &p.ty {
            AbiType::Base(BaseType::Int(t)) => Value::Int(gen_int_value(rng, *t)),
            AbiType::Base(BaseType::Bool) => Value::Bool(rng.gen_bool(0.5)),
            AbiType::Base(BaseType::Address) => Value::Addr(gen_address(rng, s)),
            AbiType::ContractAddr(c) => {
                let locs: Vec<Addr> = s
                    .addresses()
                    .filter(|l| valuetyping::location_has_contract(sigma, s, *l, c).is_ok())
                    .collect();
                Value::Addr(*locs.choose(rng)?)
            }
        };
        rho.insert(p.name.clone(), v);
    }
    rho.insert("caller".into(), Value::Addr(gen_address(rng, s)));
    rho.insert("origin".into(), Value::Addr(gen_address(rng, s)));
    let cv = if rng.gen_bool(0.7) {
        BigInt::from(rng.gen_range(0..4))
    } else {
        gen_int_value(rng, IntType::uint(256))
    };
    rho.insert("callvalue".into(), Value::Int(cv));
    Some(rho)
}

/// A random entry point applicable in `s`: a constructor, or a transition at
/// an allocated location.
pub fn gen_label(rng: &mut GenRng, sigma: &TypingState, s: &State) -> Option<StepLabel> {
    let locs: Vec<Addr> = s.addresses().collect();
    if locs.is_empty() || rng.gen_bool(0.35) {
        let contract = sigma.contracts().collect::<Vec<_>>().choose(rng)?.to_string();
        let ctor = sigma.constructor(&contract)?;
        let rho = gen_env(rng, sigma, s, &ctor.iface)?;
        // The allocated location is filled in by the caller.
        return Some(StepLabel {
            contract,
            transition: None,
            loc: s.fresh(),
            rho,
        });
    }
    let l = *locs.choose(rng)?;
    let contract = s.get(l)?.contract.clone();
    let t = sigma.transitions(&contract).choose(rng)?;
    let rho = gen_env(rng, sigma, s, &t.iface)?;
    Some(StepLabel {
        contract,
        transition: Some(t.name.clone()),
        loc: l,
        rho,
    })
}

/// Takes up to `steps` random successful steps from the empty state.
pub fn gen_walk(rng: &mut GenRng, interp: &Interp, steps: usize) -> (State, Vec<StepLabel>) {
    let mut s = State::empty();
    let mut trace = Vec::new();
    for _ in 0..steps {
        for _attempt in 0..8 {
            let Some(mut label) = gen_label(rng, interp.sigma, &s) else { continue };
            let result = match &label.transition {
                None => {
                    let ctor = interp.sigma.constructor(&label.contract).expect("listed contract");
                    interp
                        .eval_ctor(&s, &label.rho, &label.contract, ctor)
                        .map(|(l, s2)| {
                            label.loc = l;
                            s2
                        })
                }
                Some(_) => apply(interp, &s, &label).map(|(_, s2)| s2),
            };
            if let Ok(s2) = result {
                s = s2;
                trace.push(label);
                break;
            }
        }
    }
    (s, trace)
}

/// Bounds used when the suites discharge obligations of generated specs.
pub fn obligation_bounds() -> BoundsConfig {
    BoundsConfig {
        max_nodes: 50_000,
        ..BoundsConfig::default()
    }
}
