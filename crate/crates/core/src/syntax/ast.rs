//! Abstract syntax of specifications.
//!
//! Annotation fields (`annot`) are `None` after parsing and are filled in by
//! the type checker. Spans compare equal, so `==` on AST nodes is structural.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::types::{AbiType, IntType, MappingType, SlotType};
use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EnvVar {
    Caller,
    Origin,
    Callvalue,
    This,
}

impl EnvVar {
    pub fn name(self) -> &'static str {
        match self {
            EnvVar::Caller => "caller",
            EnvVar::Origin => "origin",
            EnvVar::Callvalue => "callvalue",
            EnvVar::This => "this",
        }
    }
}

impl fmt::Display for EnvVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Ref {
    pub kind: RefKind,
    pub annot: Option<SlotType>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum RefKind {
    Var(String),
    Pre(String),
    Post(String),
    Coerce(Box<Ref>, String),
    Field(Box<Ref>, String),
    Index(Box<Ref>, Box<Expr>),
    Env(EnvVar),
}

impl Ref {
    pub fn new(kind: RefKind, span: Span) -> Ref {
        Ref {
            kind,
            annot: None,
            span,
        }
    }

    pub fn var(name: &str) -> Ref {
        Ref::new(RefKind::Var(name.to_string()), Span::default())
    }

    pub fn pre(name: &str) -> Ref {
        Ref::new(RefKind::Pre(name.to_string()), Span::default())
    }

    pub fn post(name: &str) -> Ref {
        Ref::new(RefKind::Post(name.to_string()), Span::default())
    }

    pub fn env(v: EnvVar) -> Ref {
        Ref::new(RefKind::Env(v), Span::default())
    }

    pub fn field(self, name: &str) -> Ref {
        Ref::new(RefKind::Field(Box::new(self), name.to_string()), Span::default())
    }

    pub fn index(self, key: Expr) -> Ref {
        Ref::new(RefKind::Index(Box::new(self), Box::new(key)), Span::default())
    }

    pub fn coerce(self, contract: &str) -> Ref {
        Ref::new(
            RefKind::Coerce(Box::new(self), contract.to_string()),
            Span::default(),
        )
    }

    /// The storage or calldata name at the root of this reference, if any.
    pub fn root_name(&self) -> Option<&str> {
        match &self.kind {
            RefKind::Var(x) | RefKind::Pre(x) | RefKind::Post(x) => Some(x),
            RefKind::Coerce(r, _) | RefKind::Field(r, _) | RefKind::Index(r, _) => r.root_name(),
            RefKind::Env(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IntOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Exp,
}

impl IntOp {
    pub fn symbol(self) -> &'static str {
        match self {
            IntOp::Add => "+",
            IntOp::Sub => "-",
            IntOp::Mul => "*",
            IntOp::Div => "div",
            IntOp::Mod => "mod",
            IntOp::Exp => "exp",
        }
    }

    pub const ALL: [IntOp; 6] = [
        IntOp::Add,
        IntOp::Sub,
        IntOp::Mul,
        IntOp::Div,
        IntOp::Mod,
        IntOp::Exp,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoolOp {
    And,
    Or,
    Implies,
}

impl BoolOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BoolOp::And => "and",
            BoolOp::Or => "or",
            BoolOp::Implies => "==>",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CmpOp {
    Lt,
    Le,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Expr {
    pub kind: ExprKind,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum ExprKind {
    Int(#[serde(serialize_with = "crate::json::ser_bigint")] BigInt),
    Bool(bool),
    Ref(Ref),
    Addr(Ref),
    BinI(IntOp, Box<Expr>, Box<Expr>),
    BinB(BoolOp, Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    InRange(IntType, Box<Expr>),
    Ite(Box<Expr>, Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    fn mk(kind: ExprKind) -> Expr {
        Expr::new(kind, Span::default())
    }

    pub fn int(n: impl Into<BigInt>) -> Expr {
        Expr::mk(ExprKind::Int(n.into()))
    }

    pub fn bool(b: bool) -> Expr {
        Expr::mk(ExprKind::Bool(b))
    }

    pub fn tt() -> Expr {
        Expr::bool(true)
    }

    pub fn reference(r: Ref) -> Expr {
        let span = r.span;
        Expr::new(ExprKind::Ref(r), span)
    }

    pub fn var(name: &str) -> Expr {
        Expr::reference(Ref::var(name))
    }

    pub fn addr(r: Ref) -> Expr {
        Expr::mk(ExprKind::Addr(r))
    }

    pub fn bin_i(op: IntOp, l: Expr, r: Expr) -> Expr {
        Expr::mk(ExprKind::BinI(op, Box::new(l), Box::new(r)))
    }

    pub fn bin_b(op: BoolOp, l: Expr, r: Expr) -> Expr {
        Expr::mk(ExprKind::BinB(op, Box::new(l), Box::new(r)))
    }

    pub fn and(l: Expr, r: Expr) -> Expr {
        Expr::bin_b(BoolOp::And, l, r)
    }

    pub fn or(l: Expr, r: Expr) -> Expr {
        Expr::bin_b(BoolOp::Or, l, r)
    }

    pub fn implies(l: Expr, r: Expr) -> Expr {
        Expr::bin_b(BoolOp::Implies, l, r)
    }

    pub fn cmp(op: CmpOp, l: Expr, r: Expr) -> Expr {
        Expr::mk(ExprKind::Cmp(op, Box::new(l), Box::new(r)))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::mk(ExprKind::Not(Box::new(e)))
    }

    pub fn in_range(t: IntType, e: Expr) -> Expr {
        let span = e.span;
        Expr::new(ExprKind::InRange(t, Box::new(e)), span)
    }

    pub fn ite(c: Expr, t: Expr, f: Expr) -> Expr {
        Expr::mk(ExprKind::Ite(Box::new(c), Box::new(t), Box::new(f)))
    }

    pub fn eq(l: Expr, r: Expr) -> Expr {
        Expr::mk(ExprKind::Eq(Box::new(l), Box::new(r)))
    }

    /// Right-nested conjunction of `es`, `true` when empty.
    pub fn conj(es: impl IntoIterator<Item = Expr>) -> Expr {
        let mut es: Vec<Expr> = es.into_iter().collect();
        let mut acc = match es.pop() {
            Some(e) => e,
            None => return Expr::tt(),
        };
        while let Some(e) = es.pop() {
            acc = Expr::and(e, acc);
        }
        acc
    }

    /// Right-nested disjunction of `es`, `false` when empty.
    pub fn disj(es: impl IntoIterator<Item = Expr>) -> Expr {
        let mut es: Vec<Expr> = es.into_iter().collect();
        let mut acc = match es.pop() {
            Some(e) => e,
            None => return Expr::bool(false),
        };
        while let Some(e) = es.pop() {
            acc = Expr::or(e, acc);
        }
        acc
    }

    pub fn with_span(mut self, span: Span) -> Expr {
        self.span = span;
        self
    }
}

pub type Pairs = Vec<(Expr, MappingExpr)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum MappingExpr {
    Base(Expr),
    Lit {
        pairs: Pairs,
        annot: Option<MappingType>,
        #[serde(skip)]
        span: Span,
    },
    Upd {
        base: Ref,
        pairs: Pairs,
        annot: Option<MappingType>,
        #[serde(skip)]
        span: Span,
    },
}

impl MappingExpr {
    pub fn lit(pairs: Pairs) -> MappingExpr {
        MappingExpr::Lit {
            pairs,
            annot: None,
            span: Span::default(),
        }
    }

    pub fn upd(base: Ref, pairs: Pairs) -> MappingExpr {
        MappingExpr::Upd {
            base,
            pairs,
            annot: None,
            span: Span::default(),
        }
    }

    pub fn span(&self) -> Span {
        match self {
            MappingExpr::Base(e) => e.span,
            MappingExpr::Lit { span, .. } | MappingExpr::Upd { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum SlotExpr {
    Map(MappingExpr),
    New {
        contract: String,
        value: Option<Box<SlotExpr>>,
        args: Vec<SlotExpr>,
        #[serde(skip)]
        span: Span,
    },
    Ref(Ref),
    Addr(Box<SlotExpr>, #[serde(skip)] Span),
}

impl SlotExpr {
    /// `e` as a slot expression, in the form the parser gives it: a bare
    /// reference is a `SlotExpr::Ref`.
    pub fn expr(e: Expr) -> SlotExpr {
        match e.kind {
            ExprKind::Ref(r) => SlotExpr::Ref(r),
            kind => SlotExpr::Map(MappingExpr::Base(Expr { kind, span: e.span })),
        }
    }

    pub fn new_contract(contract: &str, value: Option<SlotExpr>, args: Vec<SlotExpr>) -> SlotExpr {
        SlotExpr::New {
            contract: contract.to_string(),
            value: value.map(Box::new),
            args,
            span: Span::default(),
        }
    }

    pub fn addr(inner: SlotExpr) -> SlotExpr {
        SlotExpr::Addr(Box::new(inner), Span::default())
    }

    pub fn span(&self) -> Span {
        match self {
            SlotExpr::Map(m) => m.span(),
            SlotExpr::New { span, .. } | SlotExpr::Addr(_, span) => *span,
            SlotExpr::Ref(r) => r.span,
        }
    }

    /// Whether a `new` occurs anywhere inside.
    pub fn contains_new(&self) -> bool {
        match self {
            SlotExpr::New { .. } => true,
            SlotExpr::Addr(inner, _) => inner.contains_new(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Param {
    pub name: String,
    pub ty: AbiType,
    #[serde(skip)]
    pub span: Span,
}

impl Param {
    pub fn new(name: &str, ty: AbiType) -> Param {
        Param {
            name: name.to_string(),
            ty,
            span: Span::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Create {
    pub ty: SlotType,
    pub name: String,
    pub rhs: SlotExpr,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Update {
    pub target: Ref,
    pub rhs: SlotExpr,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CtorCase {
    pub cond: Expr,
    pub creates: Vec<Create>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TransCase {
    pub cond: Expr,
    pub updates: Vec<Update>,
    pub returns: Option<Expr>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Constructor {
    pub iface: Vec<Param>,
    pub payable: bool,
    pub iff: Vec<Expr>,
    pub cases: Vec<CtorCase>,
    pub ensures: Vec<Expr>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Transition {
    pub name: String,
    pub iface: Vec<Param>,
    pub payable: bool,
    pub ret: Option<AbiType>,
    pub iff: Vec<Expr>,
    pub cases: Vec<TransCase>,
    pub ensures: Vec<Expr>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Contract {
    pub name: String,
    pub ctor: Constructor,
    pub transitions: Vec<Transition>,
    pub invariants: Vec<Expr>,
    #[serde(skip)]
    pub span: Span,
}

impl Contract {
    pub fn transition(&self, name: &str) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.name == name)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Spec {
    pub contracts: Vec<Contract>,
}

impl Spec {
    pub fn contract(&self, name: &str) -> Option<&Contract> {
        self.contracts.iter().find(|c| c.name == name)
    }
}

/// A node that should carry a type annotation but does not.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{what} at {span} has no type annotation")]
pub struct MissingAnnotation {
    pub what: &'static str,
    pub span: Span,
}

/// A spec whose references and mapping literals are all annotated.
#[derive(Debug, Clone, Copy)]
pub struct TypedSpec<'a>(&'a Spec);

impl<'a> TypedSpec<'a> {
    pub fn new(spec: &'a Spec) -> Result<TypedSpec<'a>, MissingAnnotation> {
        annotations::spec(spec)?;
        Ok(TypedSpec(spec))
    }

    pub fn spec(&self) -> &'a Spec {
        self.0
    }
}

mod annotations {
    use super::*;

    type R = Result<(), MissingAnnotation>;

    pub fn spec(s: &Spec) -> R {
        for c in &s.contracts {
            exprs(&c.ctor.iff)?;
            exprs(&c.ctor.ensures)?;
            for case in &c.ctor.cases {
                expr(&case.cond)?;
                for cr in &case.creates {
                    slot(&cr.rhs)?;
                }
            }
            for t in &c.transitions {
                exprs(&t.iff)?;
                exprs(&t.ensures)?;
                for case in &t.cases {
                    expr(&case.cond)?;
                    for u in &case.updates {
                        reference(&u.target)?;
                        slot(&u.rhs)?;
                    }
                    if let Some(r) = &case.returns {
                        expr(r)?;
                    }
                }
            }
            exprs(&c.invariants)?;
        }
        Ok(())
    }

    fn exprs(es: &[Expr]) -> R {
        es.iter().try_for_each(expr)
    }

    pub fn reference(r: &Ref) -> R {
        if r.annot.is_none() {
            return Err(MissingAnnotation {
                what: "reference",
                span: r.span,
            });
        }
        match &r.kind {
            RefKind::Coerce(i, _) | RefKind::Field(i, _) => reference(i),
            RefKind::Index(i, k) => {
                reference(i)?;
                expr(k)
            }
            _ => Ok(()),
        }
    }

    pub fn expr(e: &Expr) -> R {
        match &e.kind {
            ExprKind::Int(_) | ExprKind::Bool(_) => Ok(()),
            ExprKind::Ref(r) | ExprKind::Addr(r) => reference(r),
            ExprKind::BinI(_, l, r)
            | ExprKind::BinB(_, l, r)
            | ExprKind::Cmp(_, l, r)
            | ExprKind::Eq(l, r) => {
                expr(l)?;
                expr(r)
            }
            ExprKind::Not(e) | ExprKind::InRange(_, e) => expr(e),
            ExprKind::Ite(c, t, f) => {
                expr(c)?;
                expr(t)?;
                expr(f)
            }
        }
    }

    fn mapping(m: &MappingExpr) -> R {
        match m {
            MappingExpr::Base(e) => expr(e),
            MappingExpr::Lit { pairs, annot, span } => {
                if annot.is_none() {
                    return Err(MissingAnnotation {
                        what: "mapping literal",
                        span: *span,
                    });
                }
                pairs_(pairs)
            }
            MappingExpr::Upd {
                base,
                pairs,
                annot,
                span,
            } => {
                if annot.is_none() {
                    return Err(MissingAnnotation {
                        what: "mapping update",
                        span: *span,
                    });
                }
                reference(base)?;
                pairs_(pairs)
            }
        }
    }

    fn pairs_(ps: &Pairs) -> R {
        for (k, v) in ps {
            expr(k)?;
            mapping(v)?;
        }
        Ok(())
    }

    pub fn slot(s: &SlotExpr) -> R {
        match s {
            SlotExpr::Map(m) => mapping(m),
            SlotExpr::New { value, args, .. } => {
                if let Some(v) = value {
                    slot(v)?;
                }
                args.iter().try_for_each(slot)
            }
            SlotExpr::Ref(r) => reference(r),
            SlotExpr::Addr(inner, _) => slot(inner),
        }
    }
}

pub use annotations::{expr as check_expr_annotated, slot as check_slot_annotated};
