//! Shared fixtures: corpus access and the single-rule table.

#![allow(dead_code)]

use std::path::PathBuf;

use act::diagnostic::Diagnostic;
use act::entailment::{self, BoundsConfig, Verdict};
use act::semantics::{apply, default_base, default_of, Addr, Env, EvalError, Interp, State, StepLabel, TimedState, Value};
use act::syntax::{BaseType, IntType, MappingType};
use act::typing::{self, Checked, TypingState};
use act::{parser, valuetyping, wellfounded};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus_path(name: &str) -> PathBuf {
    corpus_dir().join(format!("{}.act", name))
}

pub fn corpus_src(name: &str) -> String {
    std::fs::read_to_string(corpus_path(name)).expect("corpus file")
}

/// Every corpus file as `(name, source)`, sorted by name.
pub fn corpus() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(corpus_dir())
        .expect("corpus dir")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "act"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

pub fn check(src: &str) -> Result<Checked, Vec<Diagnostic>> {
    let spec = parser::parse_spec(src)?;
    typing::check_spec(&spec)
}

pub fn checked(name: &str) -> Checked {
    check(&corpus_src(name)).unwrap_or_else(|d| panic!("{} does not check: {:?}", name, d))
}

pub fn env(pairs: &[(&str, Value)]) -> Env {
    let mut rho: Env = [
        ("caller".to_string(), Value::addr(0)),
        ("origin".to_string(), Value::addr(0)),
        ("callvalue".to_string(), Value::int(0)),
    ]
    .into_iter()
    .collect();
    for (k, v) in pairs {
        rho.insert(k.to_string(), v.clone());
    }
    rho
}

pub fn label(contract: &str, transition: Option<&str>, loc: u64, rho: Env) -> StepLabel {
    StepLabel {
        contract: contract.to_string(),
        transition: transition.map(str::to_string),
        loc: Addr(loc),
        rho,
    }
}

/// One case of the rule table.
pub struct RuleCase {
    pub rule: &'static str,
    pub what: &'static str,
    pub run: fn() -> Result<(), String>,
}

fn eval_in(src: &str, rho: &Env, loc: Option<Addr>) -> Result<Value, String> {
    let e = parser::parse_expr(src).map_err(|d| d.to_string())?;
    let sigma = TypingState::new();
    Interp::new(&sigma)
        .eval_expr(TimedState::U(&State::empty()), rho, loc, &e)
        .map_err(|e| e.to_string())
}

fn expect_eval(src: &str, want: Value) -> Result<(), String> {
    expect_eval_in(src, &env(&[]), None, want)
}

fn expect_eval_in(src: &str, rho: &Env, loc: Option<Addr>, want: Value) -> Result<(), String> {
    let got = eval_in(src, rho, loc)?;
    if got == want {
        Ok(())
    } else {
        Err(format!("`{}` gave {}, expected {}", src, got, want))
    }
}

fn expect_reject(src: &str, rule: &str) -> Result<(), String> {
    match check(src) {
        Ok(_) => Err(format!("accepted, expected a {} error", rule)),
        Err(diags) => {
            if diags.iter().any(|d| d.rule.as_deref() == Some(rule)) {
                Ok(())
            } else {
                Err(format!("rejected with {:?}, expected {}", diags.iter().map(|d| d.to_string()).collect::<Vec<_>>(), rule))
            }
        }
    }
}

fn expect_accept(src: &str) -> Result<Checked, String> {
    check(src).map_err(|d| format!("rejected: {:?}", d.iter().map(|d| d.to_string()).collect::<Vec<_>>()))
}

/// Runs `steps` from the empty state and returns the last result.
fn run_steps(c: &Checked, steps: &[StepLabel]) -> Result<(Value, State), EvalError> {
    let interp = Interp::new(&c.sigma);
    let mut s = State::empty();
    let mut last = Value::Unit;
    for l in steps {
        let (v, s2) = apply(&interp, &s, l)?;
        last = v;
        s = s2;
    }
    Ok((last, s))
}

fn field(s: &State, loc: u64, x: &str) -> Result<Value, String> {
    s.get(Addr(loc))
        .and_then(|i| i.vars.get(x).cloned())
        .ok_or_else(|| format!("no field {} at @{}", x, loc))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

const FLAG: &str = "
contract Flag {
  constructor(b: bool)
    creates
      bool on := b
      uint8 n := 0
      uint256 balance := 0

  transition pick(k: uint8) : uint8
    iff
      k < 100
    case k < 10:
      updates
        n := 1
      returns 1
    case k >= 10 and k < 50:
      updates
        n := 2
      returns 2
    case k >= 40:
      returns 3
}
";

const OWNED: &str = "
contract Token {
  constructor()
    creates
      mapping(address => uint256) balances := [caller => 100]
      uint256 balance := 0

  transition give(to: address)
    iff
      inrange(uint256, balances[to] + 1)
    updates
      balances := balances[to => balances[to] + 1]
}

contract Holder {
  constructor(t: address<Token>)
    creates
      address<Token> tok := addr(t as Token)
      uint256 balance := 0

  transition peek(w: address) : uint256
    returns pre(tok) as Token.balances[w]
}
";

pub fn rule_cases() -> Vec<RuleCase> {
    vec![
        RuleCase { rule: "E-Int", what: "literal 42 evaluates to 42", run: || expect_eval("42", Value::int(42)) },
        RuleCase { rule: "E-Bool", what: "literal true", run: || expect_eval("true", Value::Bool(true)) },
        RuleCase { rule: "E-BopI", what: "2 + 3 = 5", run: || expect_eval("2 + 3", Value::int(5)) },
        RuleCase { rule: "E-BopI", what: "2 - 5 = -3 over unbounded integers", run: || expect_eval("2 - 5", Value::int(-3)) },
        RuleCase { rule: "E-BopI", what: "4 * 5 = 20", run: || expect_eval("4 * 5", Value::int(20)) },
        RuleCase { rule: "E-BopI", what: "2 exp 10 = 1024", run: || expect_eval("2 exp 10", Value::int(1024)) },
        RuleCase { rule: "E-Div", what: "7 div 2 = 3", run: || expect_eval("7 div 2", Value::int(3)) },
        RuleCase { rule: "E-DivZero", what: "5 div 0 = 0", run: || expect_eval("5 div 0", Value::int(0)) },
        RuleCase { rule: "E-Mod", what: "7 mod 3 = 1", run: || expect_eval("7 mod 3", Value::int(1)) },
        RuleCase { rule: "E-ModZero", what: "5 mod 0 = 0", run: || expect_eval("5 mod 0", Value::int(0)) },
        RuleCase { rule: "E-BopB", what: "true and false = false", run: || expect_eval("true and false", Value::Bool(false)) },
        RuleCase { rule: "E-BopB", what: "false or true = true", run: || expect_eval("false or true", Value::Bool(true)) },
        RuleCase { rule: "E-BopB", what: "false ==> false = true", run: || expect_eval("false ==> false", Value::Bool(true)) },
        RuleCase { rule: "E-Neg", what: "not true = false", run: || expect_eval("not true", Value::Bool(false)) },
        RuleCase { rule: "E-Cmp", what: "3 < 4", run: || expect_eval("3 < 4", Value::Bool(true)) },
        RuleCase { rule: "E-Cmp", what: "4 <= 3 is false", run: || expect_eval("4 <= 3", Value::Bool(false)) },
        RuleCase { rule: "E-EqTrue", what: "2 + 2 == 4", run: || expect_eval("2 + 2 == 4", Value::Bool(true)) },
        RuleCase { rule: "E-EqFalse", what: "true == false is false", run: || expect_eval("true == false", Value::Bool(false)) },
        RuleCase { rule: "E-ITETrue", what: "if true then 1 else 2 = 1", run: || expect_eval("if true then 1 else 2", Value::int(1)) },
        RuleCase { rule: "E-ITEFalse", what: "if false then 1 else 2 = 2", run: || expect_eval("if false then 1 else 2", Value::int(2)) },
        RuleCase { rule: "E-RangeTrue", what: "inrange(int, 2^300) with ι = int", run: || expect_eval("inrange(int, 2 exp 300)", Value::Bool(true)) },
        RuleCase { rule: "E-RangeTrue", what: "inrange(uint8, 255)", run: || expect_eval("inrange(uint8, 255)", Value::Bool(true)) },
        RuleCase { rule: "E-RangeFalse", what: "inrange(uint8, 256) is false", run: || expect_eval("inrange(uint8, 256)", Value::Bool(false)) },
        RuleCase { rule: "E-RangeFalse", what: "inrange(int8, -129) is false", run: || expect_eval("inrange(int8, 0 - 129)", Value::Bool(false)) },
        RuleCase {
            rule: "E-This",
            what: "this yields the current location",
            run: || expect_eval_in("this", &env(&[]), Some(Addr(7)), Value::addr(7)),
        },
        RuleCase {
            rule: "E-Environment",
            what: "caller reads ρ(caller)",
            run: || expect_eval_in("caller", &env(&[("caller", Value::addr(4))]), None, Value::addr(4)),
        },
        RuleCase {
            rule: "E-Calldata",
            what: "a parameter reads ρ(x)",
            run: || expect_eval_in("x + 1", &env(&[("x", Value::int(9))]), None, Value::int(10)),
        },
        RuleCase {
            rule: "fresh",
            what: "fresh({0, 3}) = 4",
            run: || {
                let mut s = State::empty();
                for l in [0, 3] {
                    s.insert(Addr(l), act::semantics::Instance { contract: "C".into(), vars: Default::default() });
                }
                ensure(s.fresh() == Addr(4), || format!("fresh gave {}", s.fresh()))
            },
        },
        RuleCase {
            rule: "fresh",
            what: "fresh(∅) = 0",
            run: || ensure(State::empty().fresh() == Addr(0), || "fresh(∅) is not 0".into()),
        },
        RuleCase {
            rule: "default",
            what: "default(bool) = false",
            run: || ensure(default_base(BaseType::Bool) == Value::Bool(false), || "default(bool) is not false".into()),
        },
        RuleCase {
            rule: "default",
            what: "default(uint256) = 0 and default(address) = 0",
            run: || {
                ensure(
                    default_base(BaseType::Int(IntType::uint(256))) == Value::int(0) && default_base(BaseType::Address) == Value::addr(0),
                    || "defaults are not 0".into(),
                )
            },
        },
        RuleCase {
            rule: "E-RefMapping",
            what: "a missing key reads the mapping default",
            run: || {
                let c = expect_accept(OWNED)?;
                let (_, s) = run_steps(&c, &[label("Token", None, 0, env(&[("caller", Value::addr(2))]))]).map_err(|e| e.to_string())?;
                let m = match field(&s, 0, "balances")? {
                    Value::Map(m) => m,
                    v => return Err(format!("balances is {}", v)),
                };
                let empty = default_of(&MappingType::map(BaseType::Address, MappingType::Base(BaseType::Int(IntType::uint(256)))));
                let Value::Map(e) = empty else { unreachable!() };
                ensure(m.default_value() == e.default_value(), || "wrong default".into())?;
                ensure(m.get(&act::semantics::Key::Addr(Addr(1))) == &Value::int(0), || "missing key is not 0".into())?;
                ensure(m.get(&act::semantics::Key::Addr(Addr(2))) == &Value::int(100), || "caller entry is not 100".into())
            },
        },
        RuleCase {
            rule: "E-MappingUpd",
            what: "balances[to => balances[to] + 1] updates one key",
            run: || {
                let c = expect_accept(OWNED)?;
                let (_, s) = run_steps(
                    &c,
                    &[
                        label("Token", None, 0, env(&[])),
                        label("Token", Some("give"), 0, env(&[("to", Value::addr(0))])),
                    ],
                )
                .map_err(|e| e.to_string())?;
                let Value::Map(m) = field(&s, 0, "balances")? else { return Err("not a mapping".into()) };
                ensure(m.get(&act::semantics::Key::Addr(Addr(0))) == &Value::int(101), || "balance is not 101".into())
            },
        },
        RuleCase {
            rule: "E-Coerce",
            what: "reading through address<Token> coerced to Token",
            run: || {
                let c = expect_accept(OWNED)?;
                let (v, _) = run_steps(
                    &c,
                    &[
                        label("Token", None, 0, env(&[("caller", Value::addr(5))])),
                        label("Holder", None, 1, env(&[("t", Value::addr(0))])),
                        label("Holder", Some("peek"), 1, env(&[("w", Value::addr(5))])),
                    ],
                )
                .map_err(|e| e.to_string())?;
                ensure(v == Value::int(100), || format!("peek returned {}", v))
            },
        },
        RuleCase {
            rule: "E-Ctor",
            what: "the constructor allocates fresh(s) and stores its calldata",
            run: || {
                let c = expect_accept(FLAG)?;
                let (_, s) = run_steps(&c, &[label("Flag", None, 0, env(&[("b", Value::Bool(true))]))]).map_err(|e| e.to_string())?;
                ensure(field(&s, 0, "on")? == Value::Bool(true), || "on is not true".into())
            },
        },
        RuleCase {
            rule: "E-Trans",
            what: "a false precondition is PreconditionFailed",
            run: || {
                let c = expect_accept(FLAG)?;
                let r = run_steps(
                    &c,
                    &[label("Flag", None, 0, env(&[("b", Value::Bool(true))])), label("Flag", Some("pick"), 0, env(&[("k", Value::int(200))]))],
                );
                ensure(matches!(r, Err(EvalError::PreconditionFailed { .. })), || format!("got {:?}", r.map(|x| x.0)))
            },
        },
        RuleCase {
            rule: "E-TransCases",
            what: "exactly one true case selects its updates and return",
            run: || {
                let c = expect_accept(FLAG)?;
                let (v, s) = run_steps(
                    &c,
                    &[label("Flag", None, 0, env(&[("b", Value::Bool(true))])), label("Flag", Some("pick"), 0, env(&[("k", Value::int(20))]))],
                )
                .map_err(|e| e.to_string())?;
                ensure(v == Value::int(2) && field(&s, 0, "n")? == Value::int(2), || format!("returned {}", v))
            },
        },
        RuleCase {
            rule: "E-TransCases",
            what: "two true cases are MultipleCasesMatched",
            run: || {
                let c = expect_accept(FLAG)?;
                let r = run_steps(
                    &c,
                    &[label("Flag", None, 0, env(&[("b", Value::Bool(true))])), label("Flag", Some("pick"), 0, env(&[("k", Value::int(45))]))],
                );
                ensure(matches!(r, Err(EvalError::MultipleCasesMatched { .. })), || format!("got {:?}", r.map(|x| x.0)))
            },
        },
        RuleCase {
            rule: "E-Updates",
            what: "swap reads both right-hand sides before writing",
            run: || {
                let c = checked("swap");
                let (_, s) = run_steps(
                    &c,
                    &[
                        label("Swap", None, 0, env(&[("a", Value::int(1)), ("b", Value::int(2))])),
                        label("Swap", Some("swap"), 0, env(&[])),
                    ],
                )
                .map_err(|e| e.to_string())?;
                ensure(field(&s, 0, "x")? == Value::int(2) && field(&s, 0, "y")? == Value::int(1), || "not swapped".into())
            },
        },
        RuleCase {
            rule: "E-Create",
            what: "nested new allocates inner instances at fresh locations",
            run: || {
                let c = checked("nested-new");
                let (_, s) = run_steps(&c, &[label("Root", None, 3, env(&[]))]).map_err(|e| e.to_string())?;
                ensure(s.get(Addr(3)).map(|i| i.contract.as_str()) == Some("Root"), || "root is not at @3".into())?;
                ensure(s.iter().count() == 4, || format!("{} locations", s.iter().count()))
            },
        },
        RuleCase {
            rule: "E-Create",
            what: "callvalue of a value-carrying creation binds the callee's callvalue",
            run: || {
                let c = checked("payable");
                let (_, s) = run_steps(
                    &c,
                    &[
                        label("Bank", None, 1, env(&[])),
                        label("Bank", Some("fund"), 1, env(&[("v", Value::int(9))])),
                    ],
                )
                .map_err(|e| e.to_string())?;
                let Value::Addr(vault) = field(&s, 1, "vault")? else { return Err("vault is not an address".into()) };
                ensure(field(&s, vault.0, "balance")? == Value::int(9), || "vault balance is not 9".into())
            },
        },
        RuleCase { rule: "T-Int", what: "256 : uint8 is rejected", run: || expect_reject(&corpus_src("bad-uint8"), "T-Int") },
        RuleCase {
            rule: "WFInt",
            what: "`int` in an interface is rejected",
            run: || expect_reject("contract C {\n constructor(x: int)\n creates\n uint256 balance := 0\n}\n", "WFInt"),
        },
        RuleCase {
            rule: "T-Create",
            what: "a value argument to a non-payable constructor is rejected",
            run: || {
                expect_reject(
                    "contract A {\n constructor()\n creates\n uint256 balance := 0\n}\ncontract B {\n constructor()\n creates\n A a := new A{value: 1}()\n uint256 balance := 0\n}\n",
                    "T-Create",
                )
            },
        },
        RuleCase {
            rule: "T-CreatePayable",
            what: "a payable constructor needs a value argument",
            run: || {
                expect_reject(
                    "contract A {\n constructor() payable\n creates\n uint256 balance := callvalue\n}\ncontract B {\n constructor()\n creates\n A a := new A()\n uint256 balance := 0\n}\n",
                    "T-CreatePayable",
                )
            },
        },
        RuleCase {
            rule: "T-Environment",
            what: "callvalue is not readable in a return",
            run: || {
                expect_reject(
                    "contract C {\n constructor()\n creates\n uint256 balance := 0\n transition f() : uint256\n returns callvalue\n}\n",
                    "T-Environment",
                )
            },
        },
        RuleCase {
            rule: "T-Storage",
            what: "contracts may only refer to contracts declared before them",
            run: || match check(&corpus_src("order-error")) {
                Ok(_) => Err("accepted".into()),
                Err(_) => Ok(()),
            },
        },
        RuleCase {
            rule: "T-Spec",
            what: "the counter spec is accepted with its obligations",
            run: || expect_accept(&corpus_src("counter")).map(|c| drop(c.obligations)),
        },
        RuleCase {
            rule: "V-Int",
            what: "256 is not a value of uint8",
            run: || {
                let sigma = TypingState::new();
                let ty = act::syntax::SlotType::base(BaseType::Int(IntType::uint(8)));
                ensure(valuetyping::value_has_slot(&sigma, &State::empty(), &Value::int(256), &ty).is_err(), || "256 accepted".into())
            },
        },
        RuleCase {
            rule: "V-Contract",
            what: "an address is typed at A only if it holds an A",
            run: || {
                let c = checked("counter");
                let (_, s) = run_steps(&c, &[label("Counter", None, 0, env(&[]))]).map_err(|e| e.to_string())?;
                ensure(
                    valuetyping::location_has_contract(&c.sigma, &s, Addr(0), "Counter").is_ok()
                        && valuetyping::location_has_contract(&c.sigma, &s, Addr(1), "Counter").is_err(),
                    || "location typing is wrong".into(),
                )
            },
        },
        RuleCase {
            rule: "Acc",
            what: "a cyclic reference relation yields a cycle witness",
            run: || {
                let g = wellfounded::ContractGraph::from_edges([("A", "B"), ("B", "A")]);
                ensure(wellfounded::check_wf(&g).is_err_and(|e| e.cycle.len() == 2), || "no cycle found".into())
            },
        },
        RuleCase {
            rule: "len",
            what: "len(Root) = 2 in nested-new",
            run: || {
                let c = checked("nested-new");
                let n = wellfounded::len(&c.sigma, &act::syntax::SlotType::Contract("Root".into())).map_err(|e| e.to_string())?;
                ensure(n == 2, || format!("len = {}", n))
            },
        },
        RuleCase {
            rule: "T-Create",
            what: "x < 5 under x < 10 has a counterexample",
            run: || {
                let c = checked("obligation-cex");
                let cfg = BoundsConfig::default();
                let bad: Vec<Verdict> = entailment::discharge_all(&c.sigma, &c.obligations, &cfg)
                    .into_iter()
                    .filter(|v| matches!(v, Verdict::Counterexample(_)))
                    .collect();
                ensure(bad.len() == 1, || format!("{} counterexamples", bad.len()))
            },
        },
        RuleCase {
            rule: "T-BopI",
            what: "the guarded increment in counter is valid within bounds",
            run: || {
                let c = checked("counter");
                let vs = entailment::discharge_all(&c.sigma, &c.obligations, &BoundsConfig::default());
                ensure(vs.iter().all(Verdict::is_valid), || "an obligation failed".into())
            },
        },
    ]
}

/// A random obligation over 1 to 4 `bool` parameters, with 0 to 2 path
/// conditions and 1 to 2 goals.
pub fn bool_obligation(rng: &mut rand_chacha::ChaCha8Rng) -> act::typing::Obligation {
    use act::syntax::{AbiType, BoolOp, Expr, Param, Ref, SlotType};
    use act::typing::{Obligation, ObligationContext, ObligationKind};
    use rand::Rng;

    fn gen(rng: &mut rand_chacha::ChaCha8Rng, n: usize, depth: u32) -> Expr {
        let leaf = depth == 0 || rng.gen_bool(0.3);
        if leaf {
            if rng.gen_bool(0.15) {
                return Expr::bool(rng.gen());
            }
            let mut r = Ref::var(&format!("b{}", rng.gen_range(0..n)));
            r.annot = Some(SlotType::base(BaseType::Bool));
            return Expr::reference(r);
        }
        match rng.gen_range(0..6) {
            0 => Expr::not(gen(rng, n, depth - 1)),
            1 => Expr::bin_b(BoolOp::And, gen(rng, n, depth - 1), gen(rng, n, depth - 1)),
            2 => Expr::bin_b(BoolOp::Or, gen(rng, n, depth - 1), gen(rng, n, depth - 1)),
            3 => Expr::bin_b(BoolOp::Implies, gen(rng, n, depth - 1), gen(rng, n, depth - 1)),
            4 => Expr::eq(gen(rng, n, depth - 1), gen(rng, n, depth - 1)),
            _ => Expr::ite(gen(rng, n, depth - 1), gen(rng, n, depth - 1), gen(rng, n, depth - 1)),
        }
    }

    let n = rng.gen_range(1..=4);
    let iface: Vec<Param> = (0..n)
        .map(|i| Param {
            name: format!("b{}", i),
            ty: AbiType::Base(BaseType::Bool),
            span: Default::default(),
        })
        .collect();
    let phi: Vec<Expr> = (0..rng.gen_range(0..=2)).map(|_| gen(rng, n, 2)).collect();
    let goals: Vec<Expr> = (0..rng.gen_range(1..=2)).map(|_| gen(rng, n, 3)).collect();
    Obligation::new(
        "T-Test",
        "Test.constructor",
        Default::default(),
        ObligationContext {
            sigma_len: 0,
            iface,
            phi,
            contract: None,
            timed: false,
        },
        ObligationKind::Exprs { goals },
    )
}

/// Truth-table oracle: whether every assignment satisfying Φ satisfies
/// every goal.
pub fn truth_table_valid(ob: &act::typing::Obligation) -> bool {
    let n = ob.context.iface.len();
    let sigma = TypingState::new();
    let interp = Interp::new(&sigma);
    let s = State::empty();
    (0..1u32 << n).all(|bits| {
        let pairs: Vec<(String, Value)> = (0..n).map(|i| (format!("b{}", i), Value::Bool(bits & (1 << i) != 0))).collect();
        let rho = env(&pairs.iter().map(|(k, v)| (k.as_str(), v.clone())).collect::<Vec<_>>());
        let holds = |e: &act::syntax::Expr| interp.eval_bool(&s, &rho, None, e).expect("closed boolean expression");
        !ob.context.phi.iter().all(holds) || ob.kind.goals().iter().all(holds)
    })
}
