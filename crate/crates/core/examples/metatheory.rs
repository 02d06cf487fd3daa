//! Runs the metatheory suites on a handful of generated specs, once with the
//! reference interpreter and once with a wrong one.

use act::metatheory::{run, MetaConfig};
use act::semantics::Mutation;

fn main() {
    let cfg = MetaConfig {
        cases: 20,
        ..MetaConfig::default()
    };
    print!("{}", run(&cfg).render_human());
    let wrong = MetaConfig {
        mutation: Mutation::FirstCaseWins,
        ..cfg
    };
    print!("\n{}", run(&wrong).render_human());
}
