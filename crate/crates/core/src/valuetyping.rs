//! Value and environment typing: `⊢ v : β`, `⊢ v : μ`, `Σ ⊢ v :_s σ` and
//! `Σ ⊢ ρ :_s I`.

use std::fmt;

use crate::semantics::{Addr, Env, KeySort, State, Value};
use crate::syntax::{AbiType, BaseType, MappingType, Param, SlotType};
use crate::typing::TypingState;

/// Why a value judgment does not hold: the violated rule and the path
/// (locations, fields, keys) leading to the offending value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTypeError {
    pub rule: &'static str,
    pub path: Vec<String>,
    pub message: String,
}

impl fmt::Display for ValueTypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "[{}] {}", self.rule, self.message)
        } else {
            write!(f, "[{}] at {}: {}", self.rule, self.path.join(""), self.message)
        }
    }
}

impl std::error::Error for ValueTypeError {}

pub type Judgment = Result<(), ValueTypeError>;

fn fail(rule: &'static str, message: impl Into<String>) -> Judgment {
    Err(ValueTypeError {
        rule,
        path: Vec::new(),
        message: message.into(),
    })
}

fn within(seg: String, j: Judgment) -> Judgment {
    j.map_err(|mut e| {
        e.path.insert(0, seg);
        e
    })
}

/// `⊢ v : β`
pub fn value_has_base(v: &Value, b: BaseType) -> Judgment {
    match (v, b) {
        (Value::Int(n), BaseType::Int(t)) => {
            if t.contains(n) {
                Ok(())
            } else {
                fail("V-Int", format!("{} is out of range for {}", n, t))
            }
        }
        (Value::Bool(_), BaseType::Bool) | (Value::Addr(_), BaseType::Address) => Ok(()),
        (v, b) => {
            let rule = match b {
                BaseType::Int(_) => "V-Int",
                BaseType::Bool => "V-Bool",
                BaseType::Address => "V-Addr",
            };
            fail(rule, format!("expected {}, found {} {}", b, v.sort_name(), v))
        }
    }
}

/// `⊢ v : μ`. The quantifier over keys reduces to the default plus the
/// finitely many keys where the mapping differs from it.
pub fn value_has_mapping(v: &Value, m: &MappingType) -> Judgment {
    match m {
        MappingType::Base(b) => value_has_base(v, *b),
        MappingType::Map(k, vt) => {
            let f = match v {
                Value::Map(f) => f,
                other => return fail("V-Mapping", format!("expected {}, found {}", m, other.sort_name())),
            };
            if f.key_sort() != KeySort::of(*k) {
                return fail(
                    "V-Mapping",
                    format!("keys are {}, expected {}", f.key_sort().name(), k),
                );
            }
            within("[_]".to_string(), value_has_mapping(f.default_value(), vt))?;
            for (key, val) in f.entries() {
                let kv = key.to_value();
                if value_has_base(&kv, *k).is_err() {
                    // Keys outside β are never looked up by a well-typed program.
                    continue;
                }
                within(format!("[{}]", kv), value_has_mapping(val, vt))?;
            }
            Ok(())
        }
    }
}

struct Checker<'a> {
    sigma: &'a TypingState,
    s: &'a State,
    stack: Vec<(Addr, String)>,
}

impl<'a> Checker<'a> {
    fn contract_at(&mut self, l: Addr, a: &str) -> Judgment {
        let inst = match self.s.get(l) {
            Some(i) => i,
            None => return fail("V-AddrIsContract", format!("location {} is not allocated", l)),
        };
        let layout = match self.sigma.layout(a) {
            Some(c) => c,
            None => return fail("V-AddrIsContract", format!("contract `{}` is not in Σ", a)),
        };
        if inst.contract != a {
            return fail(
                "V-AddrIsContract",
                format!("location {} holds a `{}`, expected `{}`", l, inst.contract, a),
            );
        }
        if self.stack.iter().any(|(m, c)| *m == l && c == a) {
            return fail("V-AddrIsContract", format!("location {} refers back to itself", l));
        }
        for x in inst.vars.keys() {
            if !layout.contains_key(x) {
                return fail(
                    "V-AddrIsContract",
                    format!("location {} has field `{}`, which `{}` does not declare", l, x, a),
                );
            }
        }
        self.stack.push((l, a.to_string()));
        let mut result = Ok(());
        for (x, ty) in layout {
            let j = match inst.vars.get(x) {
                None => fail(
                    "V-AddrIsContract",
                    format!("location {} is missing field `{}`", l, x),
                ),
                Some(v) => self.slot(v, ty),
            };
            if let Err(e) = within(format!("{}.{}", l, x), j) {
                result = Err(e);
                break;
            }
        }
        self.stack.pop();
        result
    }

    fn slot(&mut self, v: &Value, ty: &SlotType) -> Judgment {
        match ty {
            SlotType::Mapping(m) => value_has_mapping(v, m),
            SlotType::Abi(AbiType::Base(b)) => value_has_base(v, *b),
            SlotType::Abi(AbiType::ContractAddr(a)) | SlotType::Contract(a) => match v {
                Value::Addr(l) => self.contract_at(*l, a),
                other => fail(
                    if ty.as_contract().is_some() { "V-Contract" } else { "V-AddrIsContract" },
                    format!("expected a location of `{}`, found {}", a, other.sort_name()),
                ),
            },
        }
    }
}

/// `Σ ⊢ v :_s σ`
pub fn value_has_slot(sigma: &TypingState, s: &State, v: &Value, ty: &SlotType) -> Judgment {
    Checker {
        sigma,
        s,
        stack: Vec::new(),
    }
    .slot(v, ty)
}

/// `Σ ⊢ v :_s σ?`: anything is typed at `⊥`.
pub fn value_has_opt(sigma: &TypingState, s: &State, v: &Value, ty: Option<&SlotType>) -> Judgment {
    match ty {
        None => Ok(()),
        Some(t) => value_has_slot(sigma, s, v, t),
    }
}

/// `Σ ⊢ ℓ :_s A`
pub fn location_has_contract(sigma: &TypingState, s: &State, l: Addr, contract: &str) -> Judgment {
    value_has_slot(sigma, s, &Value::Addr(l), &SlotType::Contract(contract.to_string()))
}

/// `Σ ⊢ ρ :_s I`
pub fn env_has_iface(sigma: &TypingState, s: &State, rho: &Env, iface: &[Param]) -> Judgment {
    const FIXED: [&str; 3] = ["caller", "origin", "callvalue"];
    for k in rho.keys() {
        if !FIXED.contains(&k.as_str()) && !iface.iter().any(|p| &p.name == k) {
            return fail("V-Env", format!("`{}` is bound but not part of the interface", k));
        }
    }
    for name in FIXED {
        let want = if name == "callvalue" {
            BaseType::Int(crate::syntax::IntType::uint(256))
        } else {
            BaseType::Address
        };
        match rho.get(name) {
            None => return fail("V-Env", format!("`{}` is not bound", name)),
            Some(v) => within(name.to_string(), value_has_base(v, want))?,
        }
    }
    for p in iface {
        match rho.get(&p.name) {
            None => return fail("V-Env", format!("`{}` is not bound", p.name)),
            Some(v) => within(p.name.clone(), value_has_slot(sigma, s, v, &SlotType::from_abi(&p.ty)))?,
        }
    }
    Ok(())
}

/// Every location of `s` is typed at the contract it is tagged with.
pub fn store_well_typed(sigma: &TypingState, s: &State) -> Judgment {
    for (l, inst) in s.iter() {
        location_has_contract(sigma, s, l, &inst.contract)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{default_of, Instance, Key, MapValue};
    use crate::syntax::IntType;
    use num_bigint::BigInt;
    use std::collections::BTreeMap;

    fn u8t() -> BaseType {
        BaseType::Int(IntType::uint(8))
    }

    #[test]
    fn base_values() {
        assert!(value_has_base(&Value::int(255), u8t()).is_ok());
        assert!(value_has_base(&Value::int(-1), u8t()).is_err());
        assert!(value_has_base(&Value::Bool(true), BaseType::Address).is_err());
        let huge = Value::Int(BigInt::from(1) << 300);
        assert!(value_has_base(&huge, BaseType::Int(IntType::MathInt)).is_ok());
    }

    #[test]
    fn mappings() {
        let m = MappingType::map(u8t(), MappingType::Base(u8t()));
        assert!(value_has_mapping(&default_of(&m), &m).is_ok());
        let bad = MapValue::from_entries(KeySort::Int, Value::int(0), vec![(Key::Int(3.into()), Value::int(300))]);
        let e = value_has_mapping(&Value::Map(bad), &m).unwrap_err();
        assert_eq!(e.rule, "V-Int");
        assert_eq!(e.path, vec!["[3]".to_string()]);
        let nested = MappingType::map(BaseType::Bool, m.clone());
        assert!(value_has_mapping(&default_of(&nested), &nested).is_ok());
    }

    fn sigma_with_a() -> TypingState {
        let mut sigma = TypingState::new();
        let mut layout = crate::typing::Layout::new();
        layout.insert("n".into(), SlotType::base(u8t()));
        sigma.storage.insert("A".into(), layout);
        sigma
    }

    fn inst(n: i64) -> Instance {
        let mut vars = BTreeMap::new();
        vars.insert("n".to_string(), Value::int(n));
        Instance {
            contract: "A".into(),
            vars,
        }
    }

    #[test]
    fn contract_locations() {
        let sigma = sigma_with_a();
        let mut s = State::empty();
        assert!(location_has_contract(&sigma, &s, Addr(0), "A").is_err());
        s.insert(Addr(0), inst(3));
        assert!(location_has_contract(&sigma, &s, Addr(0), "A").is_ok());
        let mut extra = inst(3);
        extra.vars.insert("zz".into(), Value::int(0));
        s.insert(Addr(1), extra);
        assert!(location_has_contract(&sigma, &s, Addr(1), "A").is_err());
        assert!(value_has_opt(&sigma, &s, &Value::Bool(true), None).is_ok());
    }

    #[test]
    fn environments() {
        let sigma = TypingState::new();
        let s = State::empty();
        let mut rho = Env::new();
        rho.insert("caller".into(), Value::addr(1));
        rho.insert("callvalue".into(), Value::int(0));
        assert!(env_has_iface(&sigma, &s, &rho, &[]).is_err());
        rho.insert("origin".into(), Value::addr(1));
        assert!(env_has_iface(&sigma, &s, &rho, &[]).is_ok());
        rho.insert("extra".into(), Value::int(0));
        assert!(env_has_iface(&sigma, &s, &rho, &[]).is_err());
        rho.remove("extra");
        rho.insert("callvalue".into(), Value::Int(BigInt::from(1) << 256));
        assert!(env_has_iface(&sigma, &s, &rho, &[]).is_err());
    }
}
