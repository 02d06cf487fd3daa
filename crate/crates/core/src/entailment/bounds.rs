//! Finite sample sets standing in for the infinite domains of the
//! entailment quantifiers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::syntax::{Expr, ExprKind, IntType, MappingExpr, Ref, RefKind, SlotExpr};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsConfig {
    /// Extra integer samples added to every integer type (clipped to its range).
    #[serde(serialize_with = "crate::json::ser_bigints")]
    pub extra_int_samples: Vec<BigInt>,
    /// `int` samples the window `[-w, w]` plus `±2^256`.
    pub math_window: u32,
    /// Plain addresses range over `0 .. addr_domain`.
    pub addr_domain: u64,
    /// Distinct keys per mapping whose value is enumerated; other keys hold the default.
    pub map_footprint: usize,
    /// Maximum number of contract instances in an enumerated store.
    pub max_instances: usize,
    /// Add `c - 1, c, c + 1` for every literal `c` of the obligation.
    pub literal_samples: bool,
    /// Search nodes visited before giving up with an unknown verdict.
    pub max_nodes: u64,
    /// When stepping, `caller`, `origin` and `callvalue` take a single value
    /// for entry points that never read them.
    pub collapse_unused_env: bool,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            extra_int_samples: Vec::new(),
            math_window: 3,
            addr_domain: 3,
            map_footprint: 2,
            max_instances: 4,
            literal_samples: true,
            max_nodes: 2_000_000,
            collapse_unused_env: true,
        }
    }
}

impl BoundsConfig {
    /// Samples for `ι`: `{min, min+1, -1, 0, 1, max-1, max}` within range, or
    /// the `int` window, plus configured extras and literal neighbours.
    pub fn int_samples(&self, t: IntType, literals: &BTreeSet<BigInt>) -> Vec<BigInt> {
        let mut out = BTreeSet::new();
        match (t.min(), t.max()) {
            (Some(lo), Some(hi)) => {
                for n in [
                    lo.clone(),
                    &lo + 1,
                    BigInt::from(-1),
                    BigInt::from(0),
                    BigInt::one(),
                    &hi - 1,
                    hi.clone(),
                ] {
                    out.insert(n);
                }
            }
            _ => {
                let w = i64::from(self.math_window);
                for n in -w..=w {
                    out.insert(BigInt::from(n));
                }
                let big: BigInt = BigInt::one() << 256;
                out.insert(-big.clone());
                out.insert(big);
            }
        }
        out.extend(self.extra_int_samples.iter().cloned());
        if self.literal_samples {
            for c in literals {
                out.insert(c - 1);
                out.insert(c.clone());
                out.insert(c + 1);
            }
        }
        out.into_iter().filter(|n| t.contains(n)).collect()
    }

    pub fn addresses(&self) -> impl Iterator<Item = u64> {
        0..self.addr_domain.max(1)
    }
}

/// Integer literals occurring anywhere in the given expressions.
#[derive(Debug, Default, Clone)]
pub struct Literals(pub BTreeSet<BigInt>);

impl Literals {
    pub fn expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Int(n) => {
                self.0.insert(n.clone());
            }
            ExprKind::Bool(_) => {}
            ExprKind::Ref(r) | ExprKind::Addr(r) => self.reference(r),
            ExprKind::BinI(_, l, r) | ExprKind::BinB(_, l, r) | ExprKind::Cmp(_, l, r) | ExprKind::Eq(l, r) => {
                self.expr(l);
                self.expr(r);
            }
            ExprKind::Not(x) | ExprKind::InRange(_, x) => self.expr(x),
            ExprKind::Ite(c, t, f) => {
                self.expr(c);
                self.expr(t);
                self.expr(f);
            }
        }
    }

    pub fn reference(&mut self, r: &Ref) {
        match &r.kind {
            RefKind::Coerce(i, _) | RefKind::Field(i, _) => self.reference(i),
            RefKind::Index(i, k) => {
                self.reference(i);
                self.expr(k);
            }
            _ => {}
        }
    }

    pub fn mapping(&mut self, m: &MappingExpr) {
        match m {
            MappingExpr::Base(e) => self.expr(e),
            MappingExpr::Lit { pairs, .. } => self.pairs(pairs),
            MappingExpr::Upd { base, pairs, .. } => {
                self.reference(base);
                self.pairs(pairs);
            }
        }
    }

    fn pairs(&mut self, pairs: &[(Expr, MappingExpr)]) {
        for (k, v) in pairs {
            self.expr(k);
            self.mapping(v);
        }
    }

    pub fn slot(&mut self, se: &SlotExpr) {
        match se {
            SlotExpr::Map(m) => self.mapping(m),
            SlotExpr::Ref(r) => self.reference(r),
            SlotExpr::Addr(i, _) => self.slot(i),
            SlotExpr::New { value, args, .. } => {
                if let Some(v) = value {
                    self.slot(v);
                }
                for a in args {
                    self.slot(a);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&n| BigInt::from(n)).collect()
    }

    #[test]
    fn default_samples() {
        let cfg = BoundsConfig::default();
        let none = BTreeSet::new();
        assert_eq!(cfg.int_samples(IntType::uint(8), &none), ns(&[0, 1, 254, 255]));
        assert_eq!(
            cfg.int_samples(IntType::sint(8), &none),
            ns(&[-128, -127, -1, 0, 1, 126, 127])
        );
        let m = cfg.int_samples(IntType::MathInt, &none);
        assert_eq!(m.len(), 9);
    }

    #[test]
    fn literal_neighbours() {
        let cfg = BoundsConfig::default();
        let lits: BTreeSet<BigInt> = ns(&[5, 10]).into_iter().collect();
        assert_eq!(
            cfg.int_samples(IntType::uint(8), &lits),
            ns(&[0, 1, 4, 5, 6, 9, 10, 11, 254, 255])
        );
    }
}
