//! Verifies the swap spec, then again with sequentially applied updates.

use act::semantics::Mutation;
use act::verifier::{verify, ExploreConfig};
use act::{parser, typing};

fn main() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/swap.act")).unwrap();
    let c = typing::check_spec(&parser::parse_spec(&src).unwrap()).unwrap();
    let cfg = ExploreConfig {
        max_depth: 3,
        ..ExploreConfig::default()
    };
    print!("{}", verify(&c, &cfg).render_human());
    let wrong = ExploreConfig {
        mutation: Mutation::SequentialUpdates,
        ..cfg
    };
    println!("\nwith sequential updates:");
    print!("{}", verify(&c, &wrong).render_human());
}
