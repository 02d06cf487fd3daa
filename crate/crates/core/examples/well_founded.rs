//! Prints the contract reference relation of a spec, its chain lengths, and
//! the witness for a cyclic relation.

use act::wellfounded::{build_prec, check_wf, lengths, ContractGraph};
use act::{parser, typing};

fn main() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/nested-new.act")).unwrap();
    let c = typing::check_spec(&parser::parse_spec(&src).unwrap()).unwrap();
    let g = build_prec(&c.sigma);
    print!("{}", g.to_dot());
    for (name, n) in lengths(&g).unwrap() {
        println!("len({}) = {}", name, n);
    }
    let cyclic = ContractGraph::from_edges([("A", "B"), ("B", "A")]);
    println!("{}", check_wf(&cyclic).unwrap_err());
}
