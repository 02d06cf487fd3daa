//! Enumerates reachable states of the two-contract spec and prints the
//! trace to the deepest one.

use act::verifier::{explore, ExploreConfig};
use act::{parser, typing};

fn main() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/two-contract.act")).unwrap();
    let c = typing::check_spec(&parser::parse_spec(&src).unwrap()).unwrap();
    let exp = explore(
        &c.sigma,
        &ExploreConfig {
            max_depth: 3,
            ..ExploreConfig::default()
        },
    );
    println!(
        "{} states, {} edges, depth {}, {} ill-typed",
        exp.nodes.len(),
        exp.edges.len(),
        exp.depth_reached,
        exp.ill_typed.len()
    );
    let last = exp.nodes.len() - 1;
    for (i, l) in exp.trace(last).iter().enumerate() {
        println!("  {}. {}", i + 1, l);
    }
}
