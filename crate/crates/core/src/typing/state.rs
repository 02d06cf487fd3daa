//! The typing state Σ: storage layouts, constructors and transitions per contract.

use indexmap::IndexMap;
use serde::Serialize;

use crate::syntax::{Constructor, SlotType, Transition};

/// Ordered storage layout `C` of one contract.
pub type Layout = IndexMap<String, SlotType>;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TypingState {
    pub storage: IndexMap<String, Layout>,
    pub cnstr: IndexMap<String, Constructor>,
    pub trans: IndexMap<String, Vec<Transition>>,
}

impl TypingState {
    pub fn new() -> TypingState {
        TypingState::default()
    }

    pub fn layout(&self, contract: &str) -> Option<&Layout> {
        self.storage.get(contract)
    }

    /// `Σ.storage(A)(x)`
    pub fn field_type(&self, contract: &str, field: &str) -> Option<&SlotType> {
        self.storage.get(contract)?.get(field)
    }

    pub fn constructor(&self, contract: &str) -> Option<&Constructor> {
        self.cnstr.get(contract)
    }

    pub fn transitions(&self, contract: &str) -> &[Transition] {
        self.trans.get(contract).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn transition(&self, contract: &str, name: &str) -> Option<&Transition> {
        self.transitions(contract).iter().find(|t| t.name == name)
    }

    pub fn contracts(&self) -> impl Iterator<Item = &str> {
        self.storage.keys().map(|s| s.as_str())
    }

    /// Whether `self ⊆ other` as tables.
    pub fn is_prefix_of(&self, other: &TypingState) -> bool {
        self.storage
            .iter()
            .all(|(k, v)| other.storage.get(k) == Some(v))
            && self.cnstr.iter().all(|(k, v)| other.cnstr.get(k) == Some(v))
            && self.trans.iter().all(|(k, v)| other.trans.get(k) == Some(v))
    }
}
