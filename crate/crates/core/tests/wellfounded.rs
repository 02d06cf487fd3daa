//! The contract reference relation on corpus specs and hand-built graphs.

mod common;

use act::wellfounded::{build_prec, check_wf, lengths, ContractGraph};

#[test]
fn accepted_corpus_specs_are_well_founded() {
    let mut seen = 0;
    for (name, src) in common::corpus() {
        let Ok(c) = common::check(&src) else { continue };
        seen += 1;
        check_wf(&build_prec(&c.sigma)).unwrap_or_else(|e| panic!("{}: {}", name, e));
    }
    assert!(seen >= 8);
}

#[test]
fn cycles_come_with_a_witness() {
    let g = ContractGraph::from_edges([("A", "B"), ("B", "C"), ("C", "A"), ("D", "A")]);
    let err = check_wf(&g).unwrap_err();
    assert_eq!(err.cycle.len(), 3);
    for w in ["A", "B", "C"] {
        assert!(err.cycle.iter().any(|c| c == w));
    }
    let self_loop = ContractGraph::from_edges([("A", "A")]);
    assert_eq!(check_wf(&self_loop).unwrap_err().cycle, ["A"]);
}

#[test]
fn lengths_grow_along_references() {
    let g = ContractGraph::from_edges([("A", "B"), ("B", "C"), ("A", "C")]);
    let l = lengths(&g).unwrap();
    assert!(l["A"] < l["B"] && l["B"] < l["C"]);
    let c = common::checked("two-contract");
    let l = lengths(&build_prec(&c.sigma)).unwrap();
    assert!(l["A"] < l["B"]);
}
