//! The contract reference relation `≺_Σ`, its well-foundedness and the
//! `len` measure.
//!
//! `B ≺ A` when some field of `A` has type `B` or `address_B`. Edges are
//! stored as `B → A`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{AbiType, SlotType};
use crate::typing::TypingState;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ContractGraph {
    pub nodes: BTreeSet<String>,
    /// `(B, A)` for `B ≺ A`.
    pub edges: BTreeSet<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("contract references are cyclic: {}", render_cycle(.cycle))]
pub struct CycleError {
    /// A shortest cycle, listed along `≺`; the first element repeats implicitly.
    pub cycle: Vec<String>,
}

fn render_cycle(c: &[String]) -> String {
    let mut s = c.join(" ≺ ");
    if let Some(first) = c.first() {
        let _ = write!(s, " ≺ {}", first);
    }
    s
}

impl ContractGraph {
    /// Builds a graph directly, e.g. to test cyclic relations typing rejects.
    pub fn from_edges<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str)>) -> ContractGraph {
        let mut g = ContractGraph::default();
        for (b, a) in edges {
            g.nodes.insert(b.to_string());
            g.nodes.insert(a.to_string());
            g.edges.insert((b.to_string(), a.to_string()));
        }
        g
    }

    /// Contracts `B` with `B ≺ a`.
    pub fn predecessors<'a>(&'a self, a: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.iter().filter(move |(_, t)| t == a).map(|(b, _)| b.as_str())
    }

    fn successors<'a>(&'a self, b: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.iter().filter(move |(s, _)| s == b).map(|(_, a)| a.as_str())
    }

    /// Graphviz rendering, edges drawn `B -> A`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph prec {\n");
        for n in &self.nodes {
            let _ = writeln!(out, "  \"{}\";", n);
        }
        for (b, a) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", b, a);
        }
        out.push_str("}\n");
        out
    }
}

/// `≺_Σ`, computed from the storage layouts only.
pub fn build_prec(sigma: &TypingState) -> ContractGraph {
    let mut g = ContractGraph::default();
    for (a, layout) in &sigma.storage {
        g.nodes.insert(a.clone());
        for ty in layout.values() {
            if let Some(b) = ty.referenced_contract() {
                g.edges.insert((b.to_string(), a.clone()));
            }
        }
    }
    g
}

/// Every node is accessible iff the graph has no cycle. On failure returns a
/// shortest cycle, starting from its least node name.
pub fn check_wf(g: &ContractGraph) -> Result<(), CycleError> {
    let mut best: Option<Vec<String>> = None;
    for start in &g.nodes {
        // BFS from `start` back to itself.
        let mut parent: BTreeMap<&str, &str> = BTreeMap::new();
        let mut queue = VecDeque::from([start.as_str()]);
        let mut closing = None;
        'bfs: while let Some(n) = queue.pop_front() {
            for m in g.successors(n) {
                if m == start {
                    closing = Some(n);
                    break 'bfs;
                }
                if !parent.contains_key(m) {
                    parent.insert(m, n);
                    queue.push_back(m);
                }
            }
        }
        if let Some(mut n) = closing {
            let mut cycle = vec![n.to_string()];
            while n != start {
                n = parent[n];
                cycle.push(n.to_string());
            }
            cycle.reverse();
            if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
    }
    match best {
        None => Ok(()),
        Some(cycle) => Err(CycleError { cycle }),
    }
}

/// `len(Σ, A)` for every contract: the longest `≺` chain ending at `A`.
pub fn lengths(g: &ContractGraph) -> Result<BTreeMap<String, usize>, CycleError> {
    check_wf(g)?;
    fn go<'a>(g: &'a ContractGraph, a: &'a str, memo: &mut BTreeMap<String, usize>) -> usize {
        if let Some(&n) = memo.get(a) {
            return n;
        }
        let n = g
            .predecessors(a)
            .collect::<Vec<_>>()
            .into_iter()
            .map(|b| 1 + go(g, b, memo))
            .max()
            .unwrap_or(0);
        memo.insert(a.to_string(), n);
        n
    }
    let mut memo = BTreeMap::new();
    for n in &g.nodes {
        go(g, n, &mut memo);
    }
    Ok(memo)
}

/// `len(Σ, σ)`: contracts and `address_A` by their chain length, anything
/// else 0.
pub fn len(sigma: &TypingState, ty: &SlotType) -> Result<usize, CycleError> {
    let a = match ty {
        SlotType::Contract(a) | SlotType::Abi(AbiType::ContractAddr(a)) => a,
        _ => return Ok(0),
    };
    let lens = lengths(&build_prec(sigma))?;
    Ok(lens.get(a.as_str()).copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_cycle_is_reported() {
        let g = ContractGraph::from_edges([("A", "B"), ("B", "C"), ("C", "A"), ("C", "D"), ("D", "C")]);
        let err = check_wf(&g).unwrap_err();
        assert_eq!(err.cycle, vec!["C", "D"]);
        assert_eq!(err.to_string(), "contract references are cyclic: C ≺ D ≺ C");
    }

    #[test]
    fn self_loop() {
        let g = ContractGraph::from_edges([("A", "A")]);
        assert_eq!(check_wf(&g).unwrap_err().cycle, vec!["A"]);
    }

    #[test]
    fn chain_lengths() {
        let g = ContractGraph::from_edges([("C", "B"), ("B", "A"), ("C", "A")]);
        let l = lengths(&g).unwrap();
        assert_eq!(l["C"], 0);
        assert_eq!(l["B"], 1);
        assert_eq!(l["A"], 2);
    }
}
