//! Pretty printer producing concrete syntax that parses back to the same AST.

use std::fmt::{self, Write};

use num_traits::Signed;

use super::ast::*;

// Binding strength, loosest first.
const P_ITE: u8 = 0;
const P_IMPLIES: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_EQ: u8 = 4;
const P_CMP: u8 = 5;
const P_ADD: u8 = 6;
const P_MUL: u8 = 7;
const P_EXP: u8 = 8;
const P_NOT: u8 = 9;
const P_ATOM: u8 = 10;

fn prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Ite(..) => P_ITE,
        ExprKind::BinB(BoolOp::Implies, ..) => P_IMPLIES,
        ExprKind::BinB(BoolOp::Or, ..) => P_OR,
        ExprKind::BinB(BoolOp::And, ..) => P_AND,
        ExprKind::Eq(..) => P_EQ,
        ExprKind::Cmp(..) => P_CMP,
        ExprKind::BinI(IntOp::Add | IntOp::Sub, ..) => P_ADD,
        ExprKind::BinI(IntOp::Mul | IntOp::Div | IntOp::Mod, ..) => P_MUL,
        ExprKind::BinI(IntOp::Exp, ..) => P_EXP,
        ExprKind::Not(_) => P_NOT,
        _ => P_ATOM,
    }
}

fn write_at(out: &mut String, e: &Expr, min: u8) {
    if prec(e) < min {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_binary(out: &mut String, l: &Expr, op: &str, r: &Expr, lmin: u8, rmin: u8) {
    write_at(out, l, lmin);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_at(out, r, rmin);
}

pub fn write_expr(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Int(n) => {
            if n.is_negative() {
                let _ = write!(out, "(-{})", n.abs());
            } else {
                let _ = write!(out, "{}", n);
            }
        }
        ExprKind::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        ExprKind::Ref(r) => write_ref(out, r),
        ExprKind::Addr(r) => {
            out.push_str("addr(");
            write_ref(out, r);
            out.push(')');
        }
        ExprKind::BinI(op, l, r) => {
            let p = prec(e);
            if *op == IntOp::Exp {
                write_binary(out, l, op.symbol(), r, p + 1, p);
            } else {
                write_binary(out, l, op.symbol(), r, p, p + 1);
            }
        }
        ExprKind::BinB(op, l, r) => {
            let p = prec(e);
            if *op == BoolOp::Implies {
                write_binary(out, l, op.symbol(), r, p + 1, p);
            } else {
                write_binary(out, l, op.symbol(), r, p, p + 1);
            }
        }
        ExprKind::Cmp(op, l, r) => write_binary(out, l, op.symbol(), r, P_CMP + 1, P_CMP + 1),
        ExprKind::Eq(l, r) => write_binary(out, l, "==", r, P_EQ, P_EQ + 1),
        ExprKind::Not(inner) => {
            out.push_str("not ");
            write_at(out, inner, P_NOT);
        }
        ExprKind::InRange(t, inner) => {
            let _ = write!(out, "inrange({}, ", t);
            write_expr(out, inner);
            out.push(')');
        }
        ExprKind::Ite(c, t, f) => {
            out.push_str("if ");
            write_expr(out, c);
            out.push_str(" then ");
            write_expr(out, t);
            out.push_str(" else ");
            write_expr(out, f);
        }
    }
}

/// A reference used as the base of `.x`, `[e]` or `as A` needs parentheses
/// only when it is itself a coercion.
fn write_ref_base(out: &mut String, r: &Ref) {
    if matches!(r.kind, RefKind::Coerce(..)) {
        out.push('(');
        write_ref(out, r);
        out.push(')');
    } else {
        write_ref(out, r);
    }
}

pub fn write_ref(out: &mut String, r: &Ref) {
    match &r.kind {
        RefKind::Var(x) => out.push_str(x),
        RefKind::Pre(x) => {
            let _ = write!(out, "pre({})", x);
        }
        RefKind::Post(x) => {
            let _ = write!(out, "post({})", x);
        }
        RefKind::Env(v) => out.push_str(v.name()),
        RefKind::Coerce(inner, c) => {
            write_ref_base(out, inner);
            let _ = write!(out, " as {}", c);
        }
        RefKind::Field(inner, x) => {
            write_ref_base(out, inner);
            out.push('.');
            out.push_str(x);
        }
        RefKind::Index(inner, k) => {
            write_ref_base(out, inner);
            out.push('[');
            write_expr(out, k);
            out.push(']');
        }
    }
}

fn write_pairs(out: &mut String, pairs: &Pairs) {
    out.push('[');
    for (i, (k, v)) in pairs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, k);
        out.push_str(" => ");
        write_mapping(out, v);
    }
    out.push(']');
}

pub fn write_mapping(out: &mut String, m: &MappingExpr) {
    match m {
        MappingExpr::Base(e) => write_expr(out, e),
        MappingExpr::Lit { pairs, .. } => write_pairs(out, pairs),
        MappingExpr::Upd { base, pairs, .. } => {
            write_ref_base(out, base);
            write_pairs(out, pairs);
        }
    }
}

pub fn write_slot(out: &mut String, s: &SlotExpr) {
    match s {
        SlotExpr::Map(m) => write_mapping(out, m),
        SlotExpr::Ref(r) => write_ref(out, r),
        SlotExpr::Addr(inner, _) => {
            out.push_str("addr(");
            write_slot(out, inner);
            out.push(')');
        }
        SlotExpr::New {
            contract,
            value,
            args,
            ..
        } => {
            let _ = write!(out, "new {}", contract);
            if let Some(v) = value {
                out.push_str("{value: ");
                write_slot(out, v);
                out.push('}');
            }
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_slot(out, a);
            }
            out.push(')');
        }
    }
}

struct Printer {
    out: String,
}

impl Printer {
    fn line(&mut self, indent: usize, text: &str) {
        for _ in 0..indent {
            self.out.push_str("  ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn block(&mut self, indent: usize, kw: &str, es: &[Expr]) {
        if es.is_empty() {
            return;
        }
        self.line(indent, kw);
        for e in es {
            self.line(indent + 1, &expr_to_string(e));
        }
    }

    fn iface(params: &[Param]) -> String {
        let ps: Vec<String> = params.iter().map(|p| format!("{}: {}", p.name, p.ty)).collect();
        format!("({})", ps.join(", "))
    }

    fn creates(&mut self, indent: usize, creates: &[Create]) {
        self.line(indent, "creates");
        for c in creates {
            self.line(
                indent + 1,
                &format!("{} {} := {}", c.ty, c.name, slot_to_string(&c.rhs)),
            );
        }
    }

    fn updates(&mut self, indent: usize, case: &TransCase) {
        self.line(indent, "updates");
        for u in &case.updates {
            self.line(
                indent + 1,
                &format!("{} := {}", ref_to_string(&u.target), slot_to_string(&u.rhs)),
            );
        }
        if let Some(r) = &case.returns {
            self.line(indent, &format!("returns {}", expr_to_string(r)));
        }
    }

    fn contract(&mut self, c: &Contract) {
        self.line(0, &format!("contract {} {{", c.name));
        let ctor = &c.ctor;
        let mut head = format!("constructor{}", Self::iface(&ctor.iface));
        if ctor.payable {
            head.push_str(" payable");
        }
        self.line(1, &head);
        self.block(2, "iff", &ctor.iff);
        if is_caseless(ctor.cases.iter().map(|c| &c.cond)) {
            self.creates(2, &ctor.cases[0].creates);
        } else {
            for case in &ctor.cases {
                self.line(2, &format!("case {} :", expr_to_string(&case.cond)));
                self.creates(3, &case.creates);
            }
        }
        self.block(2, "ensures", &ctor.ensures);
        for t in &c.transitions {
            self.out.push('\n');
            let mut head = format!("transition {}{}", t.name, Self::iface(&t.iface));
            if t.payable {
                head.push_str(" payable");
            }
            if let Some(rt) = &t.ret {
                let _ = write!(head, " : {}", rt);
            }
            self.line(1, &head);
            self.block(2, "iff", &t.iff);
            if is_caseless(t.cases.iter().map(|c| &c.cond)) {
                self.updates(2, &t.cases[0]);
            } else {
                for case in &t.cases {
                    self.line(2, &format!("case {} :", expr_to_string(&case.cond)));
                    self.updates(3, case);
                }
            }
            self.block(2, "ensures", &t.ensures);
        }
        if !c.invariants.is_empty() {
            self.out.push('\n');
            self.block(1, "invariants", &c.invariants);
        }
        self.line(0, "}");
    }
}

/// A single case guarded by literal `true` prints without `case`.
fn is_caseless<'a>(mut conds: impl ExactSizeIterator<Item = &'a Expr>) -> bool {
    conds.len() == 1 && matches!(conds.next().unwrap().kind, ExprKind::Bool(true))
}

pub fn expr_to_string(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

pub fn ref_to_string(r: &Ref) -> String {
    let mut s = String::new();
    write_ref(&mut s, r);
    s
}

pub fn slot_to_string(se: &SlotExpr) -> String {
    let mut s = String::new();
    write_slot(&mut s, se);
    s
}

pub fn mapping_to_string(m: &MappingExpr) -> String {
    let mut s = String::new();
    write_mapping(&mut s, m);
    s
}

pub fn contract_to_string(c: &Contract) -> String {
    let mut p = Printer { out: String::new() };
    p.contract(c);
    p.out
}

pub fn spec_to_string(spec: &Spec) -> String {
    let mut p = Printer { out: String::new() };
    for (i, c) in spec.contracts.iter().enumerate() {
        if i > 0 {
            p.out.push('\n');
        }
        p.contract(c);
    }
    p.out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&expr_to_string(self))
    }
}

impl fmt::Display for Ref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&ref_to_string(self))
    }
}

impl fmt::Display for SlotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&slot_to_string(self))
    }
}

impl fmt::Display for MappingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&mapping_to_string(self))
    }
}

impl fmt::Display for Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&spec_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::types::IntType;

    #[test]
    fn literals_and_inrange() {
        assert_eq!(expr_to_string(&Expr::int(0)), "0");
        assert_eq!(
            expr_to_string(&Expr::in_range(IntType::uint(8), Expr::var("x"))),
            "inrange(uint8, x)"
        );
        assert_eq!(expr_to_string(&Expr::int(-5)), "(-5)");
    }

    #[test]
    fn parenthesizes_by_precedence() {
        let a = Expr::var("a");
        let b = Expr::var("b");
        let c = Expr::var("c");
        let sum = Expr::bin_i(IntOp::Add, a.clone(), b.clone());
        assert_eq!(
            expr_to_string(&Expr::bin_i(IntOp::Mul, sum.clone(), c.clone())),
            "(a + b) * c"
        );
        assert_eq!(
            expr_to_string(&Expr::bin_i(IntOp::Sub, a.clone(), Expr::bin_i(IntOp::Sub, b.clone(), c.clone()))),
            "a - (b - c)"
        );
        assert_eq!(
            expr_to_string(&Expr::implies(a.clone(), Expr::implies(b.clone(), c.clone()))),
            "a ==> b ==> c"
        );
        assert_eq!(
            expr_to_string(&Expr::implies(Expr::implies(a.clone(), b.clone()), c.clone())),
            "(a ==> b) ==> c"
        );
        assert_eq!(expr_to_string(&Expr::not(Expr::and(a, b))), "not (a and b)");
    }

    #[test]
    fn coerced_base_is_parenthesized() {
        let r = Ref::var("r").coerce("A").field("f");
        assert_eq!(ref_to_string(&r), "(r as A).f");
    }
}
