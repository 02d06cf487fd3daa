//! Greedy shrinking of a failing instance: drop trace steps, spec parts and
//! environment detail while the same property keeps failing.

use super::props::{check_outcome, Outcome, Prepared};
use super::{obligations_hold, Instance, Stats, Violation};
use crate::semantics::{Mutation, Value};
use crate::typing;

fn candidates(inst: &Instance) -> Vec<Instance> {
    let mut out = Vec::new();
    let with = |f: &dyn Fn(&mut Instance)| {
        let mut c = inst.clone();
        f(&mut c);
        c
    };
    if !inst.trace.is_empty() {
        out.push(with(&|c| c.trace.clear()));
    }
    for i in (0..inst.trace.len()).rev() {
        out.push(with(&|c| {
            c.trace.remove(i);
        }));
    }
    let spec = &inst.spec;
    for (ci, contract) in spec.contracts.iter().enumerate() {
        if contract.name != inst.entry.contract {
            out.push(with(&|c| {
                c.spec.contracts.remove(ci);
            }));
        }
        for (ti, t) in contract.transitions.iter().enumerate() {
            let is_entry = contract.name == inst.entry.contract && inst.entry.transition.as_deref() == Some(t.name.as_str());
            if !is_entry {
                out.push(with(&|c| {
                    c.spec.contracts[ci].transitions.remove(ti);
                }));
            }
            if !t.ensures.is_empty() {
                out.push(with(&|c| c.spec.contracts[ci].transitions[ti].ensures.clear()));
            }
            for k in 0..t.iff.len() {
                out.push(with(&|c| {
                    c.spec.contracts[ci].transitions[ti].iff.remove(k);
                }));
            }
            for (k, case) in t.cases.iter().enumerate() {
                for u in 0..case.updates.len() {
                    out.push(with(&|c| {
                        c.spec.contracts[ci].transitions[ti].cases[k].updates.remove(u);
                    }));
                }
            }
        }
        if !contract.invariants.is_empty() {
            out.push(with(&|c| c.spec.contracts[ci].invariants.clear()));
        }
        if !contract.ctor.ensures.is_empty() {
            out.push(with(&|c| c.spec.contracts[ci].ctor.ensures.clear()));
        }
        for k in 0..contract.ctor.iff.len() {
            out.push(with(&|c| {
                c.spec.contracts[ci].ctor.iff.remove(k);
            }));
        }
    }
    for (k, v) in &inst.rho {
        let smaller = match v {
            Value::Int(n) if *n != 0.into() => Value::int(0),
            Value::Bool(true) => Value::Bool(false),
            Value::Addr(a) if a.0 != 0 => Value::addr(0),
            _ => continue,
        };
        out.push(with(&|c| {
            c.rho.insert(k.clone(), smaller.clone());
        }));
    }
    out
}

fn still_fails(inst: &Instance, property: &str, mutation: Mutation) -> Option<Violation> {
    let checked = typing::check_spec(&inst.spec).ok()?;
    let valid = property == "progress" && obligations_hold(&checked);
    if property == "progress" && !valid {
        return None;
    }
    let prepared = Prepared::new(inst.spec.clone(), checked, valid, mutation);
    match check_outcome(&prepared, inst, &mut Stats::default()) {
        Outcome::Fail(v) if v.property == property => Some(v),
        _ => None,
    }
}

/// Returns the smallest failing instance found within `budget` checks and
/// the number of accepted shrink steps.
pub(crate) fn shrink(mut inst: Instance, mut v: Violation, mutation: Mutation, budget: usize) -> (Instance, Violation, usize) {
    let mut tries = 0;
    let mut steps = 0;
    'outer: loop {
        for c in candidates(&inst) {
            if tries >= budget {
                break 'outer;
            }
            tries += 1;
            if let Some(v2) = still_fails(&c, &v.property, mutation) {
                inst = c;
                v = v2;
                steps += 1;
                continue 'outer;
            }
        }
        break;
    }
    (inst, v, steps)
}
