//! Discharges the side conditions of a spec within bounds and exports each
//! one as an SMT-LIB query.

use act::entailment::{discharge_all, export::to_smtlib, BoundsConfig, Verdict};
use act::{parser, typing};

fn main() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/obligation-cex.act")).unwrap();
    let c = typing::check_spec(&parser::parse_spec(&src).unwrap()).unwrap();
    for (ob, v) in c.obligations.iter().zip(discharge_all(&c.sigma, &c.obligations, &BoundsConfig::default())) {
        match &v {
            Verdict::Counterexample(cex) => println!("{}\n  counterexample: {}", ob.summary(), cex.describe()),
            other => println!("{}\n  {}", ob.summary(), other.label()),
        }
        match to_smtlib(&c.sigma, ob) {
            Ok(q) => print!("{}", q),
            Err(e) => println!("; not exportable: {}", e.0),
        }
    }
}
