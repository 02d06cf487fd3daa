//! Runtime values.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::syntax::{BaseType, MappingType};

/// A location in the state. Locations are natural numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Addr(pub u64);

impl serde::Serialize for Addr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl fmt::Display for Addr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeySort {
    Int,
    Bool,
    Addr,
}

impl KeySort {
    pub fn of(b: BaseType) -> KeySort {
        match b {
            BaseType::Int(_) => KeySort::Int,
            BaseType::Bool => KeySort::Bool,
            BaseType::Address => KeySort::Addr,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KeySort::Int => "int",
            KeySort::Bool => "bool",
            KeySort::Addr => "address",
        }
    }
}

/// A mapping key: a base value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    Int(BigInt),
    Bool(bool),
    Addr(Addr),
}

impl Key {
    pub fn sort(&self) -> KeySort {
        match self {
            Key::Int(_) => KeySort::Int,
            Key::Bool(_) => KeySort::Bool,
            Key::Addr(_) => KeySort::Addr,
        }
    }

    pub fn from_value(v: &Value) -> Option<Key> {
        match v {
            Value::Int(n) => Some(Key::Int(n.clone())),
            Value::Bool(b) => Some(Key::Bool(*b)),
            Value::Addr(a) => Some(Key::Addr(*a)),
            _ => None,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Key::Int(n) => Value::Int(n.clone()),
            Key::Bool(b) => Value::Bool(*b),
            Key::Addr(a) => Value::Addr(*a),
        }
    }
}

/// A total function from keys to values: a finite table over a default.
///
/// The table never holds an entry equal to the default, so two mappings that
/// agree on every key compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MapValue {
    key_sort: KeySort,
    table: BTreeMap<Key, Value>,
    default: Box<Value>,
}

impl MapValue {
    pub fn new(key_sort: KeySort, default: Value) -> MapValue {
        MapValue {
            key_sort,
            table: BTreeMap::new(),
            default: Box::new(default),
        }
    }

    /// Builds a mapping by inserting `entries` in order; later keys win.
    pub fn from_entries(
        key_sort: KeySort,
        default: Value,
        entries: impl IntoIterator<Item = (Key, Value)>,
    ) -> MapValue {
        let mut m = MapValue::new(key_sort, default);
        for (k, v) in entries {
            m.set(k, v);
        }
        m
    }

    pub fn key_sort(&self) -> KeySort {
        self.key_sort
    }

    pub fn default_value(&self) -> &Value {
        &self.default
    }

    pub fn get(&self, k: &Key) -> &Value {
        self.table.get(k).unwrap_or(&self.default)
    }

    pub fn set(&mut self, k: Key, v: Value) {
        if v == *self.default {
            self.table.remove(&k);
        } else {
            self.table.insert(k, v);
        }
    }

    /// Entries that differ from the default, in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&Key, &Value)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Int(BigInt),
    Bool(bool),
    Addr(Addr),
    Map(MapValue),
    /// Result of a transition whose case has no `returns`.
    Unit,
}

impl Value {
    pub fn int(n: impl Into<BigInt>) -> Value {
        Value::Int(n.into())
    }

    pub fn addr(a: u64) -> Value {
        Value::Addr(Addr(a))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_addr(&self) -> Option<Addr> {
        match self {
            Value::Addr(a) => Some(*a),
            _ => None,
        }
    }

    pub fn as_map(&self) -> Option<&MapValue> {
        match self {
            Value::Map(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Bool(_) | Value::Addr(_))
    }

    pub fn sort_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Bool(_) => "boolean",
            Value::Addr(_) => "address",
            Value::Map(_) => "mapping",
            Value::Unit => "unit",
        }
    }
}

/// `default(β)`
pub fn default_base(b: BaseType) -> Value {
    match b {
        BaseType::Int(_) => Value::Int(BigInt::zero()),
        BaseType::Bool => Value::Bool(false),
        BaseType::Address => Value::Addr(Addr(0)),
    }
}

/// `default(μ)`: zero, false, address 0, or the constant mapping of defaults.
pub fn default_of(m: &MappingType) -> Value {
    match m {
        MappingType::Base(b) => default_base(*b),
        MappingType::Map(k, v) => Value::Map(MapValue::new(KeySort::of(*k), default_of(v))),
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{}", n),
            Value::Bool(b) => write!(f, "{}", b),
            Value::Addr(a) => write!(f, "{}", a),
            Value::Unit => f.write_str("()"),
            Value::Map(m) => {
                f.write_str("[")?;
                for (i, (k, v)) in m.entries().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{} => {}", k.to_value(), v)?;
                }
                if !m.is_empty() {
                    f.write_str(", ")?;
                }
                write!(f, "_ => {}]", m.default_value())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::IntType;

    #[test]
    fn defaults() {
        assert_eq!(default_base(BaseType::Bool), Value::Bool(false));
        assert_eq!(default_base(BaseType::Address), Value::addr(0));
        let m = MappingType::map(BaseType::Int(IntType::uint(8)), MappingType::Base(BaseType::Bool));
        match default_of(&m) {
            Value::Map(mv) => {
                assert!(mv.is_empty());
                assert_eq!(mv.get(&Key::Int(BigInt::from(7))), &Value::Bool(false));
            }
            v => panic!("{:?}", v),
        }
    }

    #[test]
    fn canonical_tables() {
        let mut a = MapValue::new(KeySort::Int, Value::int(0));
        a.set(Key::Int(1.into()), Value::int(5));
        a.set(Key::Int(1.into()), Value::int(0));
        assert_eq!(a, MapValue::new(KeySort::Int, Value::int(0)));
    }

    #[test]
    fn later_entries_win() {
        let m = MapValue::from_entries(
            KeySort::Int,
            Value::int(0),
            vec![(Key::Int(1.into()), Value::int(2)), (Key::Int(1.into()), Value::int(3))],
        );
        assert_eq!(m.get(&Key::Int(1.into())), &Value::int(3));
    }
}
