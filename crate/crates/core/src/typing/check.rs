//! The typing judgments, made algorithmic by checking against an expected type.

use crate::diagnostic::Diagnostic;
use crate::span::Span;
use crate::syntax::pretty::ref_to_string;
use crate::syntax::*;

use super::obligation::{Obligation, ObligationContext, ObligationKind};
use super::state::{Layout, TypingState};

type TResult<T> = Result<T, Diagnostic>;

fn err(span: Span, rule: &str, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::rule(span, rule, msg)
}

/// Reference tag: `S` for storage reachable without coercion, `N` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    S,
    N,
}

/// Everything a judgment is indexed by: `Σ; I; Φ ⊢_{A?, t}`.
#[derive(Debug, Clone, Copy)]
pub struct Ctx<'a> {
    pub sigma: &'a TypingState,
    pub iface: &'a [Param],
    pub phi: &'a [Expr],
    pub contract: Option<&'a str>,
    pub timed: bool,
    pub owner: &'a str,
}

impl<'a> Ctx<'a> {
    fn with_phi(self, phi: &'a [Expr]) -> Ctx<'a> {
        Ctx { phi, ..self }
    }

    fn untimed(self) -> Ctx<'a> {
        Ctx { timed: false, ..self }
    }

    fn calldata(&self, x: &str) -> Option<&'a Param> {
        self.iface.iter().find(|p| p.name == x)
    }
}

fn uint256() -> BaseType {
    BaseType::Int(IntType::uint(256))
}

fn slot_of_mapping(m: MappingType) -> SlotType {
    match m {
        MappingType::Base(b) => SlotType::base(b),
        m => SlotType::Mapping(m),
    }
}

/// `ref₁ ⪯ ref₂`: `ref₁` is `ref₂` or a field path extending it.
pub fn more_specific_or_equal(r1: &Ref, r2: &Ref) -> bool {
    if same_ref(r1, r2) {
        return true;
    }
    match &r1.kind {
        RefKind::Field(inner, _) => more_specific_or_equal(inner, r2),
        _ => false,
    }
}

fn same_ref(a: &Ref, b: &Ref) -> bool {
    ref_to_string(a) == ref_to_string(b)
}

/// Collects obligations while checking.
#[derive(Debug, Default)]
pub struct Checker {
    pub obligations: Vec<Obligation>,
}

impl Checker {
    pub fn new() -> Checker {
        Checker::default()
    }

    fn emit(&mut self, ctx: Ctx, rule: &str, span: Span, kind: ObligationKind, timed: bool) {
        let context = ObligationContext {
            sigma_len: ctx.sigma.storage.len(),
            iface: ctx.iface.to_vec(),
            phi: ctx.phi.to_vec(),
            contract: ctx.contract.map(str::to_string),
            timed,
        };
        self.obligations
            .push(Obligation::new(rule, ctx.owner, span, context, kind));
    }

    fn emit_inrange(&mut self, ctx: Ctx, rule: &str, t: IntType, e: &Expr) {
        let goal = Expr::in_range(t, e.clone()).with_span(e.span);
        self.emit(ctx, rule, e.span, ObligationKind::Exprs { goals: vec![goal] }, ctx.timed);
    }

    // ---- well-formedness ----

    pub fn wf_abi(sigma: &TypingState, a: &AbiType, span: Span) -> TResult<()> {
        match a {
            AbiType::Base(BaseType::Int(IntType::MathInt)) => Err(err(
                span,
                "WFInt",
                "`int` is not allowed in an interface; use a sized integer type",
            )),
            AbiType::ContractAddr(c) if sigma.layout(c).is_none() => Err(err(
                span,
                "WFContractAddr",
                format!("contract `{}` is not declared before this point", c),
            )),
            _ => Ok(()),
        }
    }

    pub fn wf_slot(sigma: &TypingState, s: &SlotType, span: Span) -> TResult<()> {
        match s {
            SlotType::Contract(c) if sigma.layout(c).is_none() => Err(err(
                span,
                "T-WFContract",
                format!("contract `{}` is not declared before this point", c),
            )),
            SlotType::Abi(AbiType::ContractAddr(_)) => match s {
                SlotType::Abi(a) => Self::wf_abi(sigma, a, span),
                _ => unreachable!(),
            },
            _ => Ok(()),
        }
    }

    pub fn wf_iface(sigma: &TypingState, iface: &[Param]) -> TResult<()> {
        for (i, p) in iface.iter().enumerate() {
            Self::wf_abi(sigma, &p.ty, p.span)?;
            if iface[..i].iter().any(|q| q.name == p.name) {
                return Err(err(
                    p.span,
                    "T-WFEnv",
                    format!("duplicate interface name `{}`", p.name),
                ));
            }
        }
        Ok(())
    }

    // ---- references ----

    pub fn check_ref(&mut self, ctx: Ctx, r: &mut Ref) -> TResult<(SlotType, Tag)> {
        let span = r.span;
        let is_pre = matches!(r.kind, RefKind::Pre(_));
        let (ty, tag) = match &mut r.kind {
            RefKind::Var(x) => {
                if let Some(p) = ctx.calldata(x) {
                    (SlotType::from_abi(&p.ty), Tag::N)
                } else if ctx.timed {
                    return Err(err(
                        span,
                        "T-Storage",
                        format!("storage variable `{}` must be written pre({}) or post({}) here", x, x, x),
                    ));
                } else {
                    let id = ctx.contract.ok_or_else(|| {
                        err(span, "T-Storage", format!("unbound name `{}`: no storage is in scope here", x))
                    })?;
                    let ty = ctx.sigma.field_type(id, x).ok_or_else(|| {
                        err(span, "T-Storage", format!("unbound name `{}`", x))
                    })?;
                    (ty.clone(), Tag::S)
                }
            }
            RefKind::Pre(x) | RefKind::Post(x) => {
                let rule = if is_pre { "T-StoragePre" } else { "T-StoragePost" };
                let shown = if is_pre { format!("pre({})", x) } else { format!("post({})", x) };
                if !ctx.timed {
                    return Err(err(
                        span,
                        rule,
                        format!("`{}` is only allowed in postconditions and return expressions", shown),
                    ));
                }
                if ctx.calldata(x).is_some() {
                    return Err(err(span, rule, format!("`{}` is calldata, not storage", x)));
                }
                let id = ctx
                    .contract
                    .ok_or_else(|| err(span, rule, "no storage is in scope here"))?;
                let ty = ctx
                    .sigma
                    .field_type(id, x)
                    .ok_or_else(|| err(span, rule, format!("unbound storage name `{}`", x)))?;
                (ty.clone(), Tag::S)
            }
            RefKind::Coerce(inner, a) => {
                let (t, _) = self.check_ref(ctx, inner)?;
                match t.as_contract_addr() {
                    Some(b) if b == a => (SlotType::Contract(a.clone()), Tag::N),
                    _ => {
                        return Err(err(
                            span,
                            "T-Coerce",
                            format!("`{}` has type {}, expected address<{}>", ref_to_string(inner), t, a),
                        ))
                    }
                }
            }
            RefKind::Field(inner, x) => {
                let (t, k) = self.check_ref(ctx, inner)?;
                match &t {
                    SlotType::Contract(a) => match ctx.sigma.field_type(a, x) {
                        Some(ty) => (ty.clone(), k),
                        None => {
                            return Err(err(span, "T-Field", format!("contract `{}` has no field `{}`", a, x)))
                        }
                    },
                    _ => {
                        let hint = match t.as_contract_addr() {
                            Some(a) => format!("; coerce it first with `as {}`", a),
                            None => String::new(),
                        };
                        return Err(err(
                            span,
                            "T-Field",
                            format!("`{}` has type {}, which has no fields{}", ref_to_string(inner), t, hint),
                        ));
                    }
                }
            }
            RefKind::Index(inner, key) => {
                let (t, _) = self.check_ref(ctx, inner)?;
                match t.as_mapping() {
                    Some(MappingType::Map(k, v)) => {
                        self.check_expr(ctx, key, k)?;
                        (slot_of_mapping(*v), Tag::N)
                    }
                    _ => {
                        return Err(err(
                            span,
                            "T-MapIndex",
                            format!("`{}` has type {}, which is not a mapping", ref_to_string(inner), t),
                        ))
                    }
                }
            }
            RefKind::Env(ev) => {
                if ctx.timed {
                    return Err(err(
                        span,
                        "T-Environment",
                        format!("`{}` is not allowed in postconditions or return expressions", ev.name()),
                    ));
                }
                let ty = match ev {
                    EnvVar::Caller | EnvVar::Origin => SlotType::base(BaseType::Address),
                    EnvVar::Callvalue => SlotType::base(uint256()),
                    EnvVar::This => match ctx.contract {
                        Some(id) => SlotType::Abi(AbiType::ContractAddr(id.to_string())),
                        None => return Err(err(span, "T-This", "`this` is not available in a constructor")),
                    },
                };
                (ty, Tag::N)
            }
        };
        r.annot = Some(ty.clone());
        Ok((ty, tag))
    }

    // ---- expressions ----

    /// Sort of an expression, used to pick the operand type of `==`.
    fn synth_sort(&mut self, ctx: Ctx, e: &Expr) -> TResult<BaseType> {
        Ok(match &e.kind {
            ExprKind::Int(_) | ExprKind::BinI(..) => BaseType::Int(IntType::MathInt),
            ExprKind::Bool(_)
            | ExprKind::BinB(..)
            | ExprKind::Cmp(..)
            | ExprKind::Not(_)
            | ExprKind::InRange(..)
            | ExprKind::Eq(..) => BaseType::Bool,
            ExprKind::Addr(_) => BaseType::Address,
            ExprKind::Ite(_, t, _) => self.synth_sort(ctx, t)?,
            ExprKind::Ref(r) => {
                let mut r = r.clone();
                let (t, _) = Checker::new().check_ref(ctx, &mut r)?;
                match t.as_base() {
                    Some(BaseType::Int(_)) => BaseType::Int(IntType::MathInt),
                    Some(b) => b,
                    None if t.as_contract_addr().is_some() => BaseType::Address,
                    None => {
                        return Err(err(
                            e.span,
                            "T-Eq",
                            format!("values of type {} cannot be compared", t),
                        ))
                    }
                }
            }
        })
    }

    pub fn check_expr(&mut self, ctx: Ctx, e: &mut Expr, want: BaseType) -> TResult<()> {
        let span = e.span;
        let mismatch = |rule: &str, found: &str| {
            err(span, rule, format!("expected {}, found {}", want, found))
        };
        let int = BaseType::Int(IntType::MathInt);
        let pending: Option<(&'static str, IntType)> = match &mut e.kind {
            ExprKind::Int(n) => match want {
                BaseType::Int(t) if t.contains(n) => None,
                BaseType::Int(t) => {
                    return Err(err(span, "T-Int", format!("literal {} is out of range for {}", n, t)))
                }
                _ => return Err(mismatch("T-Int", "an integer literal")),
            },
            ExprKind::Bool(_) => match want {
                BaseType::Bool => None,
                _ => return Err(mismatch("T-Bool", "a boolean literal")),
            },
            ExprKind::Ref(r) => {
                let (t, _) = self.check_ref(ctx, r)?;
                match (t.as_base(), want) {
                    (Some(BaseType::Int(have)), BaseType::Int(w)) => {
                        if have.fits_in(w) {
                            None
                        } else {
                            Some(("T-NumConv", w))
                        }
                    }
                    (Some(BaseType::Bool), BaseType::Bool) | (Some(BaseType::Address), BaseType::Address) => None,
                    (None, BaseType::Address) if t.as_contract_addr().is_some() => {
                        r.annot = Some(SlotType::base(BaseType::Address));
                        None
                    }
                    (Some(_), _) => {
                        return Err(mismatch("T-Ref", &format!("`{}` of type {}", ref_to_string(r), t)))
                    }
                    (None, _) => {
                        return Err(err(
                            span,
                            "T-Ref",
                            format!("`{}` has type {}, which is not a base type", ref_to_string(r), t),
                        ))
                    }
                }
            }
            ExprKind::Addr(r) => {
                if want != BaseType::Address {
                    return Err(mismatch("T-Addr", "an address"));
                }
                if ctx.timed {
                    return Err(err(span, "T-Addr", "`addr` is not allowed in timed expressions"));
                }
                let (t, _) = self.check_ref(ctx, r)?;
                if t.as_contract().is_none() {
                    return Err(err(
                        span,
                        "T-Addr",
                        format!("`{}` has type {}, expected a contract", ref_to_string(r), t),
                    ));
                }
                None
            }
            ExprKind::BinI(_, l, r) => {
                let w = match want {
                    BaseType::Int(w) => w,
                    _ => return Err(mismatch("T-BopI", "an integer expression")),
                };
                self.check_expr(ctx, l, int)?;
                self.check_expr(ctx, r, int)?;
                match (w, ctx.timed) {
                    (IntType::MathInt, _) => None,
                    (_, true) => Some(("T-NumConv", w)),
                    (_, false) => Some(("T-BopI", w)),
                }
            }
            ExprKind::BinB(_, l, r) => {
                if want != BaseType::Bool {
                    return Err(mismatch("T-BopB", "a boolean expression"));
                }
                self.check_expr(ctx, l, BaseType::Bool)?;
                self.check_expr(ctx, r, BaseType::Bool)?;
                None
            }
            ExprKind::Not(inner) => {
                if want != BaseType::Bool {
                    return Err(mismatch("T-Neg", "a boolean expression"));
                }
                self.check_expr(ctx, inner, BaseType::Bool)?;
                None
            }
            ExprKind::Cmp(_, l, r) => {
                if want != BaseType::Bool {
                    return Err(mismatch("T-Cmp", "a comparison"));
                }
                self.check_expr(ctx, l, int)?;
                self.check_expr(ctx, r, int)?;
                None
            }
            ExprKind::InRange(_, inner) => {
                if want != BaseType::Bool {
                    return Err(mismatch("T-Range", "a range check"));
                }
                self.check_expr(ctx, inner, int)?;
                None
            }
            ExprKind::Ite(c, t, f) => {
                self.check_expr(ctx, c, BaseType::Bool)?;
                self.check_expr(ctx, t, want)?;
                self.check_expr(ctx, f, want)?;
                None
            }
            ExprKind::Eq(l, r) => {
                if want != BaseType::Bool {
                    return Err(mismatch("T-Eq", "an equality"));
                }
                let sort = self.synth_sort(ctx, l)?;
                self.check_expr(ctx, l, sort)?;
                self.check_expr(ctx, r, sort)?;
                None
            }
        };
        if let Some((rule, t)) = pending {
            self.emit_inrange(ctx, rule, t, e);
        }
        Ok(())
    }

    // ---- mapping and slot expressions ----

    fn check_pairs(&mut self, ctx: Ctx, pairs: &mut Pairs, k: BaseType, v: &MappingType) -> TResult<()> {
        for (key, val) in pairs.iter_mut() {
            self.check_expr(ctx, key, k)?;
            self.check_mapping(ctx, val, v)?;
        }
        Ok(())
    }

    pub fn check_mapping(&mut self, ctx: Ctx, m: &mut MappingExpr, want: &MappingType) -> TResult<()> {
        let ctx = ctx.untimed();
        let span = m.span();
        match (m, want) {
            (MappingExpr::Base(e), MappingType::Base(b)) => self.check_expr(ctx, e, *b),
            (MappingExpr::Base(e), MappingType::Map(..)) => Err(match &e.kind {
                ExprKind::Ref(r) => err(
                    span,
                    "T-MappingUpd",
                    format!("copy the mapping with `{}[]`", ref_to_string(r)),
                ),
                _ => err(span, "T-Exp", format!("expected {}, found an expression", want)),
            }),
            (MappingExpr::Lit { pairs, annot, .. }, MappingType::Map(k, v)) => {
                self.check_pairs(ctx, pairs, *k, v)?;
                *annot = Some(want.clone());
                Ok(())
            }
            (MappingExpr::Upd { base, pairs, annot, .. }, MappingType::Map(k, v)) => {
                let (t, _) = self.check_ref(ctx, base)?;
                if t != SlotType::Mapping(want.clone()) {
                    return Err(err(
                        span,
                        "T-MappingUpd",
                        format!("`{}` has type {}, expected {}", ref_to_string(base), t, want),
                    ));
                }
                self.check_pairs(ctx, pairs, *k, v)?;
                *annot = Some(want.clone());
                Ok(())
            }
            (_, MappingType::Base(b)) => Err(err(
                span,
                "T-Mapping",
                format!("expected {}, found a mapping expression", b),
            )),
        }
    }

    pub fn check_slot(&mut self, ctx: Ctx, se: &mut SlotExpr, want: &SlotType) -> TResult<()> {
        let ctx = ctx.untimed();
        let span = se.span();
        match se {
            SlotExpr::Map(m) => match want.as_mapping() {
                Some(mu) => self.check_mapping(ctx, m, &mu),
                None => Err(err(span, "T-MapExp", format!("expected {}, found an expression", want))),
            },
            SlotExpr::Ref(r) => {
                if let Some(c) = want.as_contract() {
                    let (t, _) = self.check_ref(ctx, r)?;
                    if t.as_contract() != Some(c) {
                        return Err(err(
                            span,
                            "T-SlotRef",
                            format!("`{}` has type {}, expected {}", ref_to_string(r), t, want),
                        ));
                    }
                    return Ok(());
                }
                if let Some(b) = want.as_base() {
                    let mut e = Expr::new(ExprKind::Ref(r.clone()), r.span);
                    self.check_expr(ctx, &mut e, b)?;
                    if let ExprKind::Ref(checked) = e.kind {
                        *r = checked;
                    }
                    return Ok(());
                }
                if let Some(mu) = want.as_mapping() {
                    let mut m = MappingExpr::Base(Expr::new(ExprKind::Ref(r.clone()), r.span));
                    return self.check_mapping(ctx, &mut m, &mu);
                }
                let (t, _) = self.check_ref(ctx, r)?;
                let hint = match t.as_contract_addr() {
                    Some(a) => format!("; write `addr({} as {})`", ref_to_string(r), a),
                    None => String::new(),
                };
                Err(err(
                    span,
                    "T-SlotAddr",
                    format!("`{}` has type {}, expected {}{}", ref_to_string(r), t, want, hint),
                ))
            }
            SlotExpr::Addr(inner, _) => {
                if let Some(a) = want.as_contract_addr() {
                    return self.check_slot(ctx, inner, &SlotType::Contract(a.to_string()));
                }
                if want.as_base() == Some(BaseType::Address) {
                    if let SlotExpr::Ref(r) = &mut **inner {
                        let mut e = Expr::new(ExprKind::Addr(r.clone()), span);
                        self.check_expr(ctx, &mut e, BaseType::Address)?;
                        if let ExprKind::Addr(checked) = e.kind {
                            *r = checked;
                        }
                        return Ok(());
                    }
                }
                Err(err(span, "T-SlotAddr", format!("expected {}, found an address expression", want)))
            }
            SlotExpr::New {
                contract,
                value,
                args,
                ..
            } => {
                if want.as_contract() != Some(contract.as_str()) {
                    return Err(err(
                        span,
                        "T-Create",
                        format!("`new {}` has type {}, expected {}", contract, contract, want),
                    ));
                }
                let ctor = ctx.sigma.constructor(contract).ok_or_else(|| {
                    err(span, "T-Create", format!("no constructor for `{}` is in scope", contract))
                })?;
                match (ctor.payable, value.is_some()) {
                    (false, true) => {
                        return Err(err(
                            span,
                            "T-Create",
                            format!("the constructor of `{}` is not payable; remove the value argument", contract),
                        ))
                    }
                    (true, false) => {
                        return Err(err(
                            span,
                            "T-CreatePayable",
                            format!("the constructor of `{}` is payable; supply `{{value: ...}}`", contract),
                        ))
                    }
                    _ => {}
                }
                let rule = if ctor.payable { "T-CreatePayable" } else { "T-Create" };
                if ctor.iface.len() != args.len() {
                    return Err(err(
                        span,
                        rule,
                        format!(
                            "`{}` takes {} argument(s), {} given",
                            contract,
                            ctor.iface.len(),
                            args.len()
                        ),
                    ));
                }
                for (p, a) in ctor.iface.iter().zip(args.iter_mut()) {
                    self.check_slot(ctx, a, &SlotType::from_abi(&p.ty))?;
                }
                if let Some(v) = value {
                    self.check_slot(ctx, v, &SlotType::base(uint256()))?;
                }
                let kind = ObligationKind::Iffs {
                    callee: contract.clone(),
                    args: args.clone(),
                    value: value.as_ref().map(|v| (**v).clone()),
                    binder: ctor.iface.clone(),
                    goals: ctor.iff.clone(),
                };
                self.emit(ctx, rule, span, kind, false);
                Ok(())
            }
        }
    }

    // ---- creates and updates ----

    pub fn check_creates(&mut self, ctx: Ctx, creates: &mut [Create]) -> TResult<Layout> {
        let ctx = Ctx { contract: None, ..ctx.untimed() };
        let mut layout = Layout::new();
        for c in creates.iter_mut() {
            Self::wf_slot(ctx.sigma, &c.ty, c.span)?;
            if layout.contains_key(&c.name) {
                return Err(err(c.span, "T-Creates", format!("`{}` is created twice", c.name)));
            }
            self.check_slot(ctx, &mut c.rhs, &c.ty)?;
            layout.insert(c.name.clone(), c.ty.clone());
        }
        if layout.get("balance") != Some(&SlotType::base(uint256())) {
            let span = creates.first().map(|c| c.span).unwrap_or_default();
            return Err(err(span, "T-Creates", "the constructor must create `uint256 balance`"));
        }
        Ok(layout)
    }

    pub fn check_updates(&mut self, ctx: Ctx, updates: &mut [Update]) -> TResult<()> {
        let ctx = ctx.untimed();
        for u in updates.iter_mut() {
            let (t, tag) = self.check_ref(ctx, &mut u.target)?;
            if tag != Tag::S {
                return Err(err(
                    u.target.span,
                    "T-Update",
                    format!(
                        "`{}` cannot be assigned: only storage reachable without coercion is updatable",
                        ref_to_string(&u.target)
                    ),
                ));
            }
            self.check_slot(ctx, &mut u.rhs, &t)?;
        }
        for i in 0..updates.len() {
            for j in 0..i {
                if more_specific_or_equal(&updates[j].target, &updates[i].target) {
                    return Err(err(
                        updates[i].span,
                        "T-Updates",
                        format!(
                            "`{}` is updated after `{}`, which it contains",
                            ref_to_string(&updates[i].target),
                            ref_to_string(&updates[j].target)
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    // ---- constructors, transitions, contracts ----

    fn exhaustiveness(pres: &[Expr], conds: &[Expr], span: Span) -> Expr {
        let mut disjoint = Vec::new();
        for i in 0..conds.len() {
            for j in i + 1..conds.len() {
                disjoint.push(Expr::not(Expr::and(conds[i].clone(), conds[j].clone())));
            }
        }
        let body = Expr::and(Expr::disj(conds.iter().cloned()), Expr::conj(disjoint));
        Expr::implies(Expr::conj(pres.iter().cloned()), body).with_span(span)
    }

    fn path_condition(cond: &Expr, pres: &[Expr]) -> Vec<Expr> {
        let mut phi = vec![cond.clone()];
        phi.extend(pres.iter().cloned());
        phi
    }

    /// `Σ ⊢_Id cnstr : C`
    pub fn check_ctor(&mut self, sigma: &TypingState, id: &str, ctor: &mut Constructor) -> TResult<Layout> {
        Self::wf_iface(sigma, &ctor.iface)?;
        let owner = format!("{}.constructor", id);
        let iface = ctor.iface.clone();
        let base = Ctx {
            sigma,
            iface: &iface,
            phi: &[],
            contract: None,
            timed: false,
            owner: &owner,
        };
        for pre in ctor.iff.iter_mut() {
            self.check_expr(base, pre, BaseType::Bool)?;
        }
        for case in ctor.cases.iter_mut() {
            self.check_expr(base, &mut case.cond, BaseType::Bool)?;
        }
        let mut layout: Option<Layout> = None;
        for case in ctor.cases.iter_mut() {
            let phi = Self::path_condition(&case.cond, &ctor.iff);
            let c = self.check_creates(base.with_phi(&phi), &mut case.creates)?;
            match &layout {
                None => layout = Some(c),
                Some(prev) if prev.iter().eq(c.iter()) => {}
                Some(_) => {
                    return Err(err(
                        case.span,
                        "T-Ctor",
                        "every case of a constructor must create the same storage layout",
                    ))
                }
            }
        }
        let layout = layout.ok_or_else(|| err(ctor.span, "T-Ctor", "a constructor needs at least one case"))?;
        if let Some(p) = iface.iter().find(|p| layout.contains_key(&p.name)) {
            return Err(err(
                p.span,
                "T-Ctor",
                format!("`{}` is both a constructor argument and a storage name", p.name),
            ));
        }
        let mut sigma2 = sigma.clone();
        sigma2.storage.insert(id.to_string(), layout.clone());
        let post_ctx = Ctx {
            sigma: &sigma2,
            contract: Some(id),
            ..base
        };
        for post in ctor.ensures.iter_mut() {
            self.check_expr(post_ctx, post, BaseType::Bool)?;
        }
        let conds: Vec<Expr> = ctor.cases.iter().map(|c| c.cond.clone()).collect();
        let goal = Self::exhaustiveness(&ctor.iff, &conds, ctor.span);
        self.emit(base, "T-Ctor", ctor.span, ObligationKind::Exprs { goals: vec![goal] }, false);
        Ok(layout)
    }

    /// `Σ ⊢_Id trans`
    pub fn check_trans(&mut self, sigma: &TypingState, id: &str, t: &mut Transition) -> TResult<()> {
        Self::wf_iface(sigma, &t.iface)?;
        if let Some(ret) = &t.ret {
            Self::wf_abi(sigma, ret, t.span)?;
        }
        let owner = format!("{}.{}", id, t.name);
        let iface = t.iface.clone();
        let base = Ctx {
            sigma,
            iface: &iface,
            phi: &[],
            contract: Some(id),
            timed: false,
            owner: &owner,
        };
        for pre in t.iff.iter_mut() {
            self.check_expr(base, pre, BaseType::Bool)?;
        }
        for case in t.cases.iter_mut() {
            self.check_expr(base, &mut case.cond, BaseType::Bool)?;
        }
        if t.cases.is_empty() {
            return Err(err(t.span, "T-Trans", "a transition needs at least one case"));
        }
        for case in t.cases.iter_mut() {
            let phi = Self::path_condition(&case.cond, &t.iff);
            self.check_updates(base.with_phi(&phi), &mut case.updates)?;
            let timed = Ctx {
                timed: true,
                ..base.with_phi(&phi)
            };
            match (&t.ret, &mut case.returns) {
                (None, None) => {}
                (Some(ret), None) => {
                    return Err(err(
                        case.span,
                        "T-Trans",
                        format!("`{}` declares return type {} but this case returns nothing", t.name, ret),
                    ))
                }
                (None, Some(e)) => {
                    return Err(err(
                        e.span,
                        "T-Trans",
                        format!("`{}` declares no return type but this case returns a value", t.name),
                    ))
                }
                (Some(AbiType::Base(b)), Some(e)) => self.check_expr(timed, e, *b)?,
                (Some(AbiType::ContractAddr(a)), Some(e)) => {
                    let span = e.span;
                    let ok = match &mut e.kind {
                        ExprKind::Ref(r) => {
                            let (ty, _) = self.check_ref(timed, r)?;
                            ty.as_contract_addr() == Some(a.as_str())
                        }
                        _ => false,
                    };
                    if !ok {
                        return Err(err(
                            span,
                            "T-Trans",
                            format!("a return of type address<{}> must be a reference of that type", a),
                        ));
                    }
                }
            }
        }
        let timed = Ctx { timed: true, ..base };
        for post in t.ensures.iter_mut() {
            self.check_expr(timed, post, BaseType::Bool)?;
        }
        let conds: Vec<Expr> = t.cases.iter().map(|c| c.cond.clone()).collect();
        let goal = Self::exhaustiveness(&t.iff, &conds, t.span);
        self.emit(base, "T-Trans", t.span, ObligationKind::Exprs { goals: vec![goal] }, false);
        Ok(())
    }

    /// `Σ ⊢ contract : Σ''`. Errors in independent parts are all reported.
    pub fn check_contract(&mut self, sigma: &TypingState, c: &mut Contract) -> Result<TypingState, Vec<Diagnostic>> {
        if sigma.layout(&c.name).is_some() {
            return Err(vec![err(
                c.span,
                "T-Spec",
                format!("contract `{}` is declared twice", c.name),
            )]);
        }
        let layout = self.check_ctor(sigma, &c.name, &mut c.ctor).map_err(|d| vec![d])?;
        let mut sigma1 = sigma.clone();
        sigma1.storage.insert(c.name.clone(), layout);
        sigma1.cnstr.insert(c.name.clone(), c.ctor.clone());

        let mut errors = Vec::new();
        for i in 0..c.transitions.len() {
            let name = c.transitions[i].name.clone();
            if c.transitions[..i].iter().any(|t| t.name == name) {
                errors.push(err(
                    c.transitions[i].span,
                    "T-Contract",
                    format!("transition `{}` is declared twice", name),
                ));
                continue;
            }
            if let Err(d) = self.check_trans(&sigma1, &c.name, &mut c.transitions[i]) {
                errors.push(d);
            }
        }
        let owner = format!("{}.invariants", c.name);
        let inv_ctx = Ctx {
            sigma: &sigma1,
            iface: &[],
            phi: &[],
            contract: Some(&c.name),
            timed: false,
            owner: &owner,
        };
        for inv in c.invariants.iter_mut() {
            if let Err(d) = self.check_expr(inv_ctx, inv, BaseType::Bool) {
                errors.push(d);
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        sigma1.trans.insert(c.name.clone(), c.transitions.clone());
        Ok(sigma1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specificity() {
        let a = Ref::var("a");
        let af = Ref::var("a").field("f");
        let afg = Ref::var("a").field("f").field("g");
        assert!(more_specific_or_equal(&a, &a));
        assert!(more_specific_or_equal(&af, &a));
        assert!(more_specific_or_equal(&afg, &a));
        assert!(!more_specific_or_equal(&a, &af));
        assert!(!more_specific_or_equal(&Ref::var("b"), &a));
    }
}
