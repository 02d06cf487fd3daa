//! JSON form of values, states and environments.
//!
//! Integers and addresses are decimal strings, booleans are JSON booleans,
//! mappings are `{"default": v, "entries": [[k, v], ...]}` and the unit
//! value is `null`. A state is a list of locations in address order.
//! Decoding needs the expected types, so it goes through Σ.

use serde::Serializer;
use serde_json::{json, Map, Value as Json};

use super::state::{Env, Instance, State};
use super::value::{default_of, Addr, Key, KeySort, MapValue, Value};
use crate::syntax::{AbiType, BaseType, MappingType, Param, SlotType};
use crate::typing::TypingState;

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Int(n) => Json::String(n.to_string()),
        Value::Bool(b) => Json::Bool(*b),
        Value::Addr(a) => Json::String(a.0.to_string()),
        Value::Map(m) => {
            let entries: Vec<Json> = m
                .entries()
                .map(|(k, v)| json!([value_to_json(&k.to_value()), value_to_json(v)]))
                .collect();
            json!({ "default": value_to_json(m.default_value()), "entries": entries })
        }
        Value::Unit => Json::Null,
    }
}

pub fn env_to_json(rho: &Env) -> Json {
    Json::Object(rho.iter().map(|(k, v)| (k.clone(), value_to_json(v))).collect())
}

pub fn state_to_json(s: &State) -> Json {
    let locs: Vec<Json> = s
        .iter()
        .map(|(l, inst)| {
            let vars: Map<String, Json> = inst.vars.iter().map(|(k, v)| (k.clone(), value_to_json(v))).collect();
            json!({ "addr": l.0.to_string(), "contract": inst.contract, "vars": vars })
        })
        .collect();
    Json::Array(locs)
}

pub fn ser_env<S: Serializer>(rho: &Env, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&env_to_json(rho), s)
}

pub fn ser_state<S: Serializer>(st: &State, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&state_to_json(st), s)
}

fn decimal(j: &Json, what: &str) -> Result<num_bigint::BigInt, String> {
    match j {
        Json::String(s) => s.parse().map_err(|_| format!("{}: `{}` is not a decimal integer", what, s)),
        Json::Number(n) => n.to_string().parse().map_err(|_| format!("{}: bad number {}", what, n)),
        other => Err(format!("{}: expected a decimal string, found {}", what, other)),
    }
}

fn addr(j: &Json, what: &str) -> Result<Addr, String> {
    let n = decimal(j, what)?;
    u64::try_from(&n)
        .map(Addr)
        .map_err(|_| format!("{}: {} is not an address", what, n))
}

pub fn base_from_json(j: &Json, b: BaseType, what: &str) -> Result<Value, String> {
    match b {
        BaseType::Int(_) => Ok(Value::Int(decimal(j, what)?)),
        BaseType::Address => Ok(Value::Addr(addr(j, what)?)),
        BaseType::Bool => j
            .as_bool()
            .map(Value::Bool)
            .ok_or_else(|| format!("{}: expected a boolean, found {}", what, j)),
    }
}

pub fn mapping_from_json(j: &Json, m: &MappingType, what: &str) -> Result<Value, String> {
    match m {
        MappingType::Base(b) => base_from_json(j, *b, what),
        MappingType::Map(k, v) => {
            let obj = j
                .as_object()
                .ok_or_else(|| format!("{}: expected a mapping object", what))?;
            let default = match obj.get("default") {
                Some(d) => mapping_from_json(d, v, what)?,
                None => default_of(v),
            };
            let mut out = MapValue::new(KeySort::of(*k), default);
            if let Some(entries) = obj.get("entries") {
                let entries = entries
                    .as_array()
                    .ok_or_else(|| format!("{}: `entries` must be a list", what))?;
                for e in entries {
                    let pair = e
                        .as_array()
                        .filter(|p| p.len() == 2)
                        .ok_or_else(|| format!("{}: each entry must be a [key, value] pair", what))?;
                    let key = base_from_json(&pair[0], *k, what)?;
                    let key = Key::from_value(&key).expect("base value");
                    out.set(key, mapping_from_json(&pair[1], v, what)?);
                }
            }
            Ok(Value::Map(out))
        }
    }
}

pub fn slot_from_json(j: &Json, ty: &SlotType, what: &str) -> Result<Value, String> {
    match ty {
        SlotType::Contract(_) | SlotType::Abi(AbiType::ContractAddr(_)) => Ok(Value::Addr(addr(j, what)?)),
        other => mapping_from_json(j, &other.as_mapping().expect("mapping or base"), what),
    }
}

/// Decodes a state. Field types come from Σ; well-typedness is not checked.
pub fn state_from_json(sigma: &TypingState, j: &Json) -> Result<State, String> {
    let locs = j.as_array().ok_or("a state must be a list of locations")?;
    let mut s = State::empty();
    for loc in locs {
        let obj = loc.as_object().ok_or("each location must be an object")?;
        let l = addr(obj.get("addr").ok_or("location without `addr`")?, "addr")?;
        let contract = obj
            .get("contract")
            .and_then(|c| c.as_str())
            .ok_or("location without `contract`")?;
        let layout = sigma
            .layout(contract)
            .ok_or_else(|| format!("unknown contract `{}`", contract))?;
        let vars_j = obj
            .get("vars")
            .and_then(|v| v.as_object())
            .ok_or("location without `vars`")?;
        let mut vars = std::collections::BTreeMap::new();
        for (x, vj) in vars_j {
            let ty = layout
                .get(x)
                .ok_or_else(|| format!("`{}` has no field `{}`", contract, x))?;
            vars.insert(x.clone(), slot_from_json(vj, ty, &format!("{}.{}", l, x))?);
        }
        if s.contains(l) {
            return Err(format!("location {} appears twice", l));
        }
        s.insert(
            l,
            Instance {
                contract: contract.to_string(),
                vars,
            },
        );
    }
    Ok(s)
}

/// Decodes an environment for `iface`; `caller` and `origin` default to
/// address 0 and `callvalue` to 0.
pub fn env_from_json(iface: &[Param], j: &Json) -> Result<Env, String> {
    let obj = j.as_object().ok_or("an environment must be an object")?;
    let mut rho = Env::new();
    for (k, v) in obj {
        let ty = match k.as_str() {
            "caller" | "origin" => SlotType::base(BaseType::Address),
            "callvalue" => SlotType::base(BaseType::Int(crate::syntax::IntType::uint(256))),
            _ => match iface.iter().find(|p| &p.name == k) {
                Some(p) => SlotType::from_abi(&p.ty),
                None => return Err(format!("`{}` is not part of the interface", k)),
            },
        };
        rho.insert(k.clone(), slot_from_json(v, &ty, k)?);
    }
    rho.entry("caller".into()).or_insert(Value::addr(0));
    rho.entry("origin".into()).or_insert(Value::addr(0));
    rho.entry("callvalue".into()).or_insert(Value::int(0));
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::IntType;

    #[test]
    fn mapping_round_trip() {
        let m = MappingType::map(BaseType::Address, MappingType::Base(BaseType::Int(IntType::uint(256))));
        let mut v = MapValue::new(KeySort::Addr, Value::int(0));
        v.set(Key::Addr(Addr(2)), Value::int(7));
        let j = value_to_json(&Value::Map(v.clone()));
        assert_eq!(j, json!({"default": "0", "entries": [["2", "7"]]}));
        assert_eq!(mapping_from_json(&j, &m, "m").unwrap(), Value::Map(v));
    }
}
