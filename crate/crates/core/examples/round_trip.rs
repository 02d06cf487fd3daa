//! Parses a spec, pretty-prints it and parses the result again.
//!
//! `cargo run --example round_trip [path.act]`

use act::parser::parse_spec;
use act::syntax::pretty::spec_to_string;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/swap.act").into());
    let src = std::fs::read_to_string(&path).expect("readable spec");
    let spec = parse_spec(&src).unwrap_or_else(|d| panic!("{}: {:?}", path, d));
    let printed = spec_to_string(&spec);
    print!("{}", printed);
    let again = parse_spec(&printed).expect("printed spec parses");
    println!("round trip identical: {}", spec == again);
}
