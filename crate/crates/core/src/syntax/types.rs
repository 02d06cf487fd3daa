//! Types of the language: integer, base, mapping, ABI and slot types.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

/// A bit width in `{8, 16, ..., 256}`. Other widths cannot be constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Width(u16);

impl Width {
    pub fn new(bits: u32) -> Option<Width> {
        if (8..=256).contains(&bits) && bits.is_multiple_of(8) {
            Some(Width(bits as u16))
        } else {
            None
        }
    }

    pub fn bits(self) -> u32 {
        self.0 as u32
    }

    /// Every legal width, smallest first.
    pub fn all() -> impl Iterator<Item = Width> {
        (1..=32u16).map(|i| Width(i * 8))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IntType {
    Unsigned(Width),
    Signed(Width),
    /// Unbounded mathematical integers (`int`).
    MathInt,
}

impl IntType {
    pub fn uint(bits: u32) -> IntType {
        IntType::Unsigned(Width::new(bits).expect("invalid integer width"))
    }

    pub fn sint(bits: u32) -> IntType {
        IntType::Signed(Width::new(bits).expect("invalid integer width"))
    }

    pub fn min(self) -> Option<BigInt> {
        match self {
            IntType::Unsigned(_) => Some(BigInt::zero()),
            IntType::Signed(w) => Some(-(BigInt::one() << (w.bits() - 1))),
            IntType::MathInt => None,
        }
    }

    pub fn max(self) -> Option<BigInt> {
        match self {
            IntType::Unsigned(w) => Some((BigInt::one() << w.bits()) - 1),
            IntType::Signed(w) => Some((BigInt::one() << (w.bits() - 1)) - 1),
            IntType::MathInt => None,
        }
    }

    /// `min(ι) ≤ n ≤ max(ι)`, always true for `int`.
    pub fn contains(self, n: &BigInt) -> bool {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => &lo <= n && n <= &hi,
            _ => true,
        }
    }

    /// Whether every value of `self` is also a value of `other`.
    pub fn fits_in(self, other: IntType) -> bool {
        match (self, other) {
            (_, IntType::MathInt) => true,
            (IntType::MathInt, _) => false,
            _ => {
                other.min().unwrap() <= self.min().unwrap()
                    && self.max().unwrap() <= other.max().unwrap()
            }
        }
    }
}

impl fmt::Display for IntType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntType::Unsigned(w) => write!(f, "uint{}", w.bits()),
            IntType::Signed(w) => write!(f, "int{}", w.bits()),
            IntType::MathInt => f.write_str("int"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BaseType {
    Int(IntType),
    Bool,
    Address,
}

impl BaseType {
    pub fn as_int(self) -> Option<IntType> {
        match self {
            BaseType::Int(i) => Some(i),
            _ => None,
        }
    }
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseType::Int(i) => i.fmt(f),
            BaseType::Bool => f.write_str("bool"),
            BaseType::Address => f.write_str("address"),
        }
    }
}

/// `μ ::= β | mapping(β => μ)`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MappingType {
    Base(BaseType),
    Map(BaseType, Box<MappingType>),
}

impl MappingType {
    pub fn map(key: BaseType, value: MappingType) -> MappingType {
        MappingType::Map(key, Box::new(value))
    }

    pub fn depth(&self) -> usize {
        match self {
            MappingType::Base(_) => 0,
            MappingType::Map(_, v) => 1 + v.depth(),
        }
    }
}

impl fmt::Display for MappingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MappingType::Base(b) => b.fmt(f),
            MappingType::Map(k, v) => write!(f, "mapping({} => {})", k, v),
        }
    }
}

/// `α ::= β | address_A`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AbiType {
    Base(BaseType),
    ContractAddr(String),
}

impl fmt::Display for AbiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbiType::Base(b) => b.fmt(f),
            AbiType::ContractAddr(c) => write!(f, "address<{}>", c),
        }
    }
}

/// `σ ::= μ | α | A`
///
/// A bare base type may be written either as `Mapping(Base(β))` or as
/// `Abi(Base(β))`; both denote the same slot type and compare equal.
/// The parser always produces the `Abi` form.
#[derive(Debug, Clone, Eq, Serialize)]
pub enum SlotType {
    Mapping(MappingType),
    Abi(AbiType),
    Contract(String),
}

impl SlotType {
    pub fn base(b: BaseType) -> SlotType {
        SlotType::Abi(AbiType::Base(b))
    }

    pub fn as_base(&self) -> Option<BaseType> {
        match self {
            SlotType::Mapping(MappingType::Base(b)) | SlotType::Abi(AbiType::Base(b)) => Some(*b),
            _ => None,
        }
    }

    /// The mapping type this slot type denotes, including bare base types.
    pub fn as_mapping(&self) -> Option<MappingType> {
        match self {
            SlotType::Mapping(m) => Some(m.clone()),
            SlotType::Abi(AbiType::Base(b)) => Some(MappingType::Base(*b)),
            _ => None,
        }
    }

    pub fn as_contract(&self) -> Option<&str> {
        match self {
            SlotType::Contract(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_contract_addr(&self) -> Option<&str> {
        match self {
            SlotType::Abi(AbiType::ContractAddr(c)) => Some(c),
            _ => None,
        }
    }

    /// Name of the contract this type refers to, through `A` or `address_A`.
    pub fn referenced_contract(&self) -> Option<&str> {
        self.as_contract().or_else(|| self.as_contract_addr())
    }

    pub fn from_abi(a: &AbiType) -> SlotType {
        SlotType::Abi(a.clone())
    }

    fn normalized(&self) -> SlotType {
        match self {
            SlotType::Mapping(MappingType::Base(b)) => SlotType::base(*b),
            other => other.clone(),
        }
    }
}

impl PartialEq for SlotType {
    fn eq(&self, other: &SlotType) -> bool {
        match (self.normalized(), other.normalized()) {
            (SlotType::Mapping(a), SlotType::Mapping(b)) => a == b,
            (SlotType::Abi(a), SlotType::Abi(b)) => a == b,
            (SlotType::Contract(a), SlotType::Contract(b)) => a == b,
            _ => false,
        }
    }
}

impl std::hash::Hash for SlotType {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self.normalized() {
            SlotType::Mapping(m) => {
                0u8.hash(state);
                m.hash(state)
            }
            SlotType::Abi(a) => {
                1u8.hash(state);
                a.hash(state)
            }
            SlotType::Contract(c) => {
                2u8.hash(state);
                c.hash(state)
            }
        }
    }
}

impl fmt::Display for SlotType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotType::Mapping(m) => m.fmt(f),
            SlotType::Abi(a) => a.fmt(f),
            SlotType::Contract(c) => f.write_str(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths_are_multiples_of_eight_up_to_256() {
        assert!(Width::new(0).is_none());
        assert!(Width::new(7).is_none());
        assert!(Width::new(264).is_none());
        assert_eq!(Width::all().count(), 32);
        assert!(Width::all().all(|w| w.bits() % 8 == 0));
    }

    #[test]
    fn bounds() {
        assert_eq!(IntType::uint(8).max().unwrap(), BigInt::from(255));
        assert_eq!(IntType::uint(8).min().unwrap(), BigInt::from(0));
        assert_eq!(IntType::sint(8).min().unwrap(), BigInt::from(-128));
        assert_eq!(IntType::sint(8).max().unwrap(), BigInt::from(127));
        assert!(IntType::MathInt.contains(&(BigInt::one() << 300)));
        assert!(!IntType::uint(8).contains(&BigInt::from(256)));
    }

    #[test]
    fn fits_in() {
        assert!(IntType::uint(8).fits_in(IntType::uint(16)));
        assert!(IntType::uint(8).fits_in(IntType::sint(16)));
        assert!(!IntType::uint(8).fits_in(IntType::sint(8)));
        assert!(!IntType::MathInt.fits_in(IntType::uint(256)));
    }

    #[test]
    fn base_slot_types_are_equal_in_either_form() {
        let a = SlotType::Mapping(MappingType::Base(BaseType::Bool));
        let b = SlotType::base(BaseType::Bool);
        assert_eq!(a, b);
        assert_ne!(a, SlotType::base(BaseType::Address));
    }
}
