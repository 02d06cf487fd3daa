//! States: locations mapped to contract instances, plus calling environments.

use std::collections::BTreeMap;

use super::value::{Addr, Value};

/// One contract instance: its contract name and variable table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    pub contract: String,
    pub vars: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct State {
    slots: BTreeMap<Addr, Instance>,
}

impl State {
    pub fn empty() -> State {
        State::default()
    }

    pub fn get(&self, a: Addr) -> Option<&Instance> {
        self.slots.get(&a)
    }

    pub fn get_mut(&mut self, a: Addr) -> Option<&mut Instance> {
        self.slots.get_mut(&a)
    }

    pub fn contains(&self, a: Addr) -> bool {
        self.slots.contains_key(&a)
    }

    pub fn insert(&mut self, a: Addr, inst: Instance) {
        self.slots.insert(a, inst);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Addr, &Instance)> {
        self.slots.iter().map(|(a, i)| (*a, i))
    }

    pub fn addresses(&self) -> impl Iterator<Item = Addr> + '_ {
        self.slots.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// `fresh(s) = max(dom s) + 1`, with `fresh(∅) = 0`.
    pub fn fresh(&self) -> Addr {
        match self.slots.keys().next_back() {
            Some(a) => Addr(a.0 + 1),
            None => Addr(0),
        }
    }

    /// Whether every location of `self` is present in `other`.
    pub fn dom_subset_of(&self, other: &State) -> bool {
        self.slots.keys().all(|a| other.slots.contains_key(a))
    }

    /// Reads `s(ℓ)(x)`.
    pub fn read(&self, a: Addr, x: &str) -> Option<&Value> {
        self.slots.get(&a)?.vars.get(x)
    }
}

/// A state as seen by a judgment: a single state or a (pre, post) pair.
#[derive(Debug, Clone, Copy)]
pub enum TimedState<'a> {
    U(&'a State),
    T(&'a State, &'a State),
}

impl<'a> TimedState<'a> {
    pub fn is_timed(&self) -> bool {
        matches!(self, TimedState::T(..))
    }
}

/// Timing tag produced by reference evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Timing {
    U,
    Pre,
    Post,
}

/// Calling environment: calldata names plus `caller`, `origin`, `callvalue`.
pub type Env = BTreeMap<String, Value>;

#[cfg(test)]
mod tests {
    use super::*;

    fn inst() -> Instance {
        Instance {
            contract: "A".into(),
            vars: BTreeMap::new(),
        }
    }

    #[test]
    fn fresh_addresses() {
        let mut s = State::empty();
        assert_eq!(s.fresh(), Addr(0));
        s.insert(Addr(0), inst());
        s.insert(Addr(3), inst());
        assert_eq!(s.fresh(), Addr(4));
        assert!(!s.contains(s.fresh()));
    }
}
