//! Builds a counter and increments it twice with the interpreter.

use act::semantics::serial::state_to_json;
use act::semantics::{apply, Addr, Env, Interp, State, StepLabel, Value};
use act::{parser, typing};

fn rho() -> Env {
    [
        ("caller".to_string(), Value::addr(1)),
        ("origin".to_string(), Value::addr(1)),
        ("callvalue".to_string(), Value::int(0)),
    ]
    .into_iter()
    .collect()
}

fn main() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/counter.act")).unwrap();
    let c = typing::check_spec(&parser::parse_spec(&src).unwrap()).unwrap();
    let interp = Interp::new(&c.sigma);
    let mut s = State::empty();
    let steps = [None, Some("incr"), Some("incr")];
    for t in steps {
        let label = StepLabel {
            contract: "Counter".into(),
            transition: t.map(str::to_string),
            loc: Addr(0),
            rho: rho(),
        };
        let (v, s2) = apply(&interp, &s, &label).expect("step succeeds");
        println!("{} returned {}", label, v);
        s = s2;
    }
    println!("{}", act::json::to_pretty(&state_to_json(&s)));
}
