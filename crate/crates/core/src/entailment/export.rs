//! SMT-LIB 2 rendering of obligations, for discharge by an external solver.
//!
//! Integers of every width are `Int` with range assertions, addresses are
//! non-negative `Int`s. A storage field `x` of contract `C` becomes a function
//! `|C.x|` from the location (and mapping keys) to the value; post-state
//! fields are `|C.x@post|`. The query asserts Φ and the negated goals, so
//! `unsat` means the obligation holds.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_traits::Signed;

use crate::syntax::{
    AbiType, BaseType, BoolOp, CmpOp, EnvVar, Expr, ExprKind, IntOp, IntType, MappingExpr, MappingType, RefKind,
    SlotExpr, SlotType,
};
use crate::syntax::{Param, Ref};
use crate::typing::{Obligation, ObligationKind, TypingState};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not exportable: {0}")]
pub struct NotExportable(pub String);

type R<T> = Result<T, NotExportable>;

fn no<T>(msg: impl Into<String>) -> R<T> {
    Err(NotExportable(msg.into()))
}

fn int_lit(n: &BigInt) -> String {
    if n.is_negative() {
        format!("(- {})", n.abs())
    } else {
        n.to_string()
    }
}

fn sort_of(b: BaseType) -> &'static str {
    match b {
        BaseType::Bool => "Bool",
        _ => "Int",
    }
}

fn range(t: IntType, term: &str) -> Option<String> {
    match (t.min(), t.max()) {
        (Some(lo), Some(hi)) => Some(format!("(and (<= {} {}) (<= {} {}))", int_lit(&lo), term, term, int_lit(&hi))),
        _ => None,
    }
}

fn base_constraint(b: BaseType, term: &str) -> Option<String> {
    match b {
        BaseType::Int(t) => range(t, term),
        BaseType::Address => Some(format!("(<= 0 {})", term)),
        BaseType::Bool => None,
    }
}

/// How calldata and environment names resolve in one evaluation scope.
struct Scope {
    calldata: BTreeMap<String, String>,
    caller: String,
    origin: String,
    callvalue: String,
    this: Option<String>,
}

struct Exporter<'a> {
    sigma: &'a TypingState,
    contract: Option<&'a str>,
    decls: IndexMap<String, String>,
    axioms: Vec<String>,
}

/// A reference rendered as a (possibly partial) function application.
struct Term {
    head: String,
    args: Vec<String>,
    post: bool,
}

impl Term {
    fn atom(s: String) -> Term {
        Term {
            head: s,
            args: Vec::new(),
            post: false,
        }
    }

    fn render(&self) -> String {
        if self.args.is_empty() {
            self.head.clone()
        } else {
            format!("({} {})", self.head, self.args.join(" "))
        }
    }
}

impl<'a> Exporter<'a> {
    fn declare_const(&mut self, name: &str, ty: &AbiType) {
        let sort = match ty {
            AbiType::Base(b) => sort_of(*b),
            AbiType::ContractAddr(_) => "Int",
        };
        self.decls
            .entry(name.to_string())
            .or_insert_with(|| format!("(declare-const {} {})", name, sort));
        let c = match ty {
            AbiType::Base(b) => base_constraint(*b, name),
            AbiType::ContractAddr(_) => Some(format!("(<= 0 {})", name)),
        };
        if let Some(c) = c {
            self.axioms.push(format!("(assert {})", c));
        }
    }

    /// Declares `|C.x|` (or its post-state twin) with its range axiom.
    fn field_fn(&mut self, contract: &str, field: &str, post: bool) -> R<String> {
        let ty = match self.sigma.field_type(contract, field) {
            Some(t) => t.clone(),
            None => return no(format!("`{}` has no field `{}`", contract, field)),
        };
        let name = format!("|{}.{}{}|", contract, field, if post { "@post" } else { "" });
        if self.decls.contains_key(&name) {
            return Ok(name);
        }
        let mut keys = vec!["Int".to_string()];
        let value: BaseType = match &ty {
            SlotType::Contract(_) | SlotType::Abi(AbiType::ContractAddr(_)) => BaseType::Address,
            other => {
                let mut m = other.as_mapping().expect("base or mapping");
                loop {
                    match m {
                        MappingType::Base(b) => break b,
                        MappingType::Map(k, v) => {
                            keys.push(sort_of(k).to_string());
                            m = *v;
                        }
                    }
                }
            }
        };
        self.decls.insert(
            name.clone(),
            format!("(declare-fun {} ({}) {})", name, keys.join(" "), sort_of(value)),
        );
        let vars: Vec<String> = (0..keys.len()).map(|i| format!("a{}", i)).collect();
        let binders: Vec<String> = vars.iter().zip(&keys).map(|(v, s)| format!("({} {})", v, s)).collect();
        let app = format!("({} {})", name, vars.join(" "));
        if let Some(c) = base_constraint(value, &app) {
            self.axioms
                .push(format!("(assert (forall ({}) {}))", binders.join(" "), c));
        }
        Ok(name)
    }

    fn reference(&mut self, sc: &Scope, r: &Ref) -> R<Term> {
        match &r.kind {
            RefKind::Env(ev) => Ok(Term::atom(match ev {
                EnvVar::Caller => sc.caller.clone(),
                EnvVar::Origin => sc.origin.clone(),
                EnvVar::Callvalue => sc.callvalue.clone(),
                EnvVar::This => match &sc.this {
                    Some(t) => t.clone(),
                    None => return no("`this` outside a contract"),
                },
            })),
            RefKind::Var(x) | RefKind::Pre(x) | RefKind::Post(x) => {
                if let Some(c) = sc.calldata.get(x) {
                    return Ok(Term::atom(c.clone()));
                }
                let (contract, this) = match (self.contract, &sc.this) {
                    (Some(c), Some(t)) => (c, t.clone()),
                    _ => return no(format!("storage reference `{}` without a contract", x)),
                };
                let post = matches!(r.kind, RefKind::Post(_));
                let f = self.field_fn(contract, x, post)?;
                Ok(Term {
                    head: f,
                    args: vec![this],
                    post,
                })
            }
            RefKind::Coerce(inner, _) => self.reference(sc, inner),
            RefKind::Field(inner, x) => {
                let it = self.reference(sc, inner)?;
                let contract = match inner.annot.as_ref().and_then(|t| t.referenced_contract()) {
                    Some(c) => c.to_string(),
                    None => return no("field access on an unannotated reference"),
                };
                let f = self.field_fn(&contract, x, it.post)?;
                Ok(Term {
                    head: f,
                    args: vec![it.render()],
                    post: it.post,
                })
            }
            RefKind::Index(inner, k) => {
                let key = self.expr(sc, k)?;
                let mut it = self.reference(sc, inner)?;
                if it.args.is_empty() {
                    return no("indexing a non-storage reference");
                }
                it.args.push(key);
                Ok(it)
            }
        }
    }

    fn expr(&mut self, sc: &Scope, e: &Expr) -> R<String> {
        Ok(match &e.kind {
            ExprKind::Int(n) => int_lit(n),
            ExprKind::Bool(b) => b.to_string(),
            ExprKind::Ref(r) | ExprKind::Addr(r) => self.reference(sc, r)?.render(),
            ExprKind::BinI(op, l, r) => {
                let a = self.expr(sc, l)?;
                let b = self.expr(sc, r)?;
                match op {
                    IntOp::Add => format!("(+ {} {})", a, b),
                    IntOp::Sub => format!("(- {} {})", a, b),
                    IntOp::Mul => format!("(* {} {})", a, b),
                    IntOp::Div => tdiv(&a, &b),
                    IntOp::Mod => format!("(ite (= {b} 0) 0 (- {a} (* {b} {q})))", a = a, b = b, q = tdiv(&a, &b)),
                    IntOp::Exp => match &r.kind {
                        ExprKind::Int(n) if *n >= BigInt::from(0) && *n <= BigInt::from(16) => {
                            let k: usize = n.try_into().unwrap_or(0);
                            match k {
                                0 => "1".to_string(),
                                1 => a,
                                _ => format!("(* {})", vec![a; k].join(" ")),
                            }
                        }
                        _ => return no("`exp` with a non-literal exponent"),
                    },
                }
            }
            ExprKind::BinB(op, l, r) => {
                let a = self.expr(sc, l)?;
                let b = self.expr(sc, r)?;
                let f = match op {
                    BoolOp::And => "and",
                    BoolOp::Or => "or",
                    BoolOp::Implies => "=>",
                };
                format!("({} {} {})", f, a, b)
            }
            ExprKind::Cmp(op, l, r) => {
                let a = self.expr(sc, l)?;
                let b = self.expr(sc, r)?;
                let f = match op {
                    CmpOp::Lt => "<",
                    CmpOp::Le => "<=",
                    CmpOp::Ge => ">=",
                    CmpOp::Gt => ">",
                };
                format!("({} {} {})", f, a, b)
            }
            ExprKind::Eq(l, r) => format!("(= {} {})", self.expr(sc, l)?, self.expr(sc, r)?),
            ExprKind::Not(x) => format!("(not {})", self.expr(sc, x)?),
            ExprKind::InRange(t, x) => {
                let v = self.expr(sc, x)?;
                range(*t, &v).unwrap_or_else(|| "true".to_string())
            }
            ExprKind::Ite(c, t, f) => format!(
                "(ite {} {} {})",
                self.expr(sc, c)?,
                self.expr(sc, t)?,
                self.expr(sc, f)?
            ),
        })
    }

    fn arg(&mut self, sc: &Scope, se: &SlotExpr) -> R<String> {
        match se {
            SlotExpr::Map(MappingExpr::Base(e)) => self.expr(sc, e),
            SlotExpr::Ref(r) => Ok(self.reference(sc, r)?.render()),
            SlotExpr::Addr(inner, _) => self.arg(sc, inner),
            SlotExpr::New { .. } => no("nested `new` in constructor arguments"),
            SlotExpr::Map(_) => no("mapping-valued constructor argument"),
        }
    }
}

/// Truncating division with `x div 0 = 0`.
fn tdiv(a: &str, b: &str) -> String {
    format!(
        "(ite (= {b} 0) 0 (ite (>= (* {a} {b}) 0) (div (abs {a}) (abs {b})) (- (div (abs {a}) (abs {b})))))",
        a = a,
        b = b
    )
}

/// Renders `ob` as a self-contained SMT-LIB 2 script.
pub fn to_smtlib(sigma: &TypingState, ob: &Obligation) -> Result<String, NotExportable> {
    let mut ex = Exporter {
        sigma,
        contract: ob.context.contract.as_deref(),
        decls: IndexMap::new(),
        axioms: Vec::new(),
    };
    let mut calldata = BTreeMap::new();
    for p in &ob.context.iface {
        let name = format!("|{}|", p.name);
        ex.declare_const(&name, &p.ty);
        calldata.insert(p.name.clone(), name);
    }
    let address = AbiType::Base(BaseType::Address);
    let uint256 = AbiType::Base(BaseType::Int(IntType::uint(256)));
    ex.declare_const("caller", &address);
    ex.declare_const("origin", &address);
    ex.declare_const("callvalue", &uint256);
    let this = ob.context.contract.as_ref().map(|_| {
        ex.declare_const("this", &address);
        "this".to_string()
    });
    let scope = Scope {
        calldata,
        caller: "caller".into(),
        origin: "origin".into(),
        callvalue: "callvalue".into(),
        this: this.clone(),
    };
    let mut phi = Vec::new();
    for e in &ob.context.phi {
        phi.push(ex.expr(&scope, e)?);
    }
    let mut goals = Vec::new();
    match &ob.kind {
        ObligationKind::Exprs { goals: gs } => {
            for g in gs {
                goals.push(ex.expr(&scope, g)?);
            }
        }
        ObligationKind::Iffs {
            args,
            value,
            binder,
            goals: gs,
            ..
        } => {
            let mut callee = BTreeMap::new();
            for (p, a) in binder.iter().zip(args) {
                let t = ex.arg(&scope, a)?;
                let name = format!("|callee.{}|", p.name);
                declare_bound(&mut ex, &name, p, &t);
                callee.insert(p.name.clone(), name);
            }
            let callvalue = match value {
                Some(v) => ex.arg(&scope, v)?,
                None => "0".to_string(),
            };
            let inner = Scope {
                calldata: callee,
                caller: this.unwrap_or_else(|| "0".to_string()),
                origin: "origin".into(),
                callvalue,
                this: None,
            };
            for g in gs {
                goals.push(ex.expr(&inner, g)?);
            }
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "; {} [{}] {}", ob.hash, ob.rule, ob.owner);
    let _ = writeln!(out, "; unsat means the obligation holds");
    let _ = writeln!(out, "(set-logic ALL)");
    for d in ex.decls.values() {
        let _ = writeln!(out, "{}", d);
    }
    for a in &ex.axioms {
        let _ = writeln!(out, "{}", a);
    }
    for p in &phi {
        let _ = writeln!(out, "(assert {})", p);
    }
    let goal = match goals.len() {
        0 => "true".to_string(),
        1 => goals.remove(0),
        _ => format!("(and {})", goals.join(" ")),
    };
    let _ = writeln!(out, "(assert (not {}))", goal);
    let _ = writeln!(out, "(check-sat)");
    Ok(out)
}

fn declare_bound(ex: &mut Exporter, name: &str, p: &Param, term: &str) {
    let sort = match &p.ty {
        AbiType::Base(b) => sort_of(*b),
        AbiType::ContractAddr(_) => "Int",
    };
    ex.decls
        .insert(name.to_string(), format!("(define-fun {} () {} {})", name, sort, term));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_and_division() {
        assert_eq!(int_lit(&BigInt::from(-3)), "(- 3)");
        assert!(tdiv("a", "b").starts_with("(ite (= b 0) 0"));
    }
}
