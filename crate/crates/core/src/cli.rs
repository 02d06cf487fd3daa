//! The `act` command line: check, obligations, run, verify, explore and
//! metatheory.
//!
//! Exit codes: 0 success, 1 parse or type errors (or a failed metatheory
//! run), 2 an obligation counterexample, a violated property or a failed
//! step, 3 I/O and malformed input.

use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::diagnostic::Diagnostic;
use crate::entailment::{self, BoundsConfig, Verdict};
use crate::json::{to_pretty, SCHEMA_VERSION};
use crate::metatheory::{self, MetaConfig};
use crate::semantics::serial::{env_from_json, env_to_json, state_from_json, state_to_json, value_to_json};
use crate::semantics::{Addr, Interp, Mutation, State, StepLabel};
use crate::typing::{self, Checked, Obligation};
use crate::verifier::{self, ExploreConfig};
use crate::{parser, valuetyping, wellfounded};

pub const EXIT_OK: u8 = 0;
pub const EXIT_TYPE: u8 = 1;
pub const EXIT_COUNTEREXAMPLE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "act", version, about = "Type checker, interpreter and bounded verifier for act specifications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse, type check and discharge obligations.
    Check(CheckArgs),
    /// List obligations with their verdicts.
    Obligations(ObligationsArgs),
    /// Run one constructor or transition.
    Run(RunArgs),
    /// Explore reachable states and check invariants and postconditions.
    Verify(VerifyArgs),
    /// Print the explored state graph.
    Explore(ExploreArgs),
    /// Property-test determinism, frame, preservation and progress on generated specs.
    Metatheory(MetaArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    /// Extra integer samples for obligations and steps, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub int_samples: Vec<BigInt>,
    /// Plain addresses range over 0..N.
    #[arg(long, default_value_t = 3)]
    pub addr_domain: u64,
    /// Search nodes per obligation before giving up.
    #[arg(long, default_value_t = 2_000_000)]
    pub max_nodes: u64,
}

impl BoundArgs {
    pub fn config(&self) -> BoundsConfig {
        BoundsConfig {
            extra_int_samples: self.int_samples.clone(),
            addr_domain: self.addr_domain,
            max_nodes: self.max_nodes,
            ..BoundsConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ExploreBoundArgs {
    #[arg(long, default_value_t = 4)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_states: usize,
    /// Skip discharging obligations and treat them as valid.
    #[arg(long)]
    pub assume_obligations: bool,
    /// Run a deliberately wrong interpreter variant.
    #[arg(long, default_value = "none", hide = true)]
    pub mutation: Mutation,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    /// Skip discharging obligations and treat them as valid.
    #[arg(long)]
    pub assume_obligations: bool,
    /// Print Σ as JSON.
    #[arg(long)]
    pub dump_sigma: bool,
    /// Print the annotated syntax tree as JSON.
    #[arg(long)]
    pub dump_typed: bool,
    /// Print the collected obligations as JSON.
    #[arg(long)]
    pub dump_obligations: bool,
    /// Print the contract reference relation as a DOT graph.
    #[arg(long)]
    pub dump_prec: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ObligationsArgs {
    pub path: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    /// Also print each obligation as an SMT-LIB query.
    #[arg(long)]
    pub smt: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    pub path: PathBuf,
    /// `Contract` for the constructor or `Contract.transition`.
    #[arg(long)]
    pub entry: String,
    /// Target location of a transition.
    #[arg(long)]
    pub loc: Option<u64>,
    /// Calldata and environment as a JSON object, e.g. `{"x": "3", "caller": "1"}`.
    #[arg(long, default_value = "{}")]
    pub args: String,
    /// Input state as a JSON file; the empty state by default.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, default_value = "none", hide = true)]
    pub mutation: Mutation,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub path: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub explore: ExploreBoundArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExploreArgs {
    pub path: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[command(flatten)]
    pub explore: ExploreBoundArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MetaArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of generated specs.
    #[arg(long, short = 'n', default_value_t = 100)]
    pub cases: usize,
    /// Run the suites against a deliberately wrong interpreter.
    #[arg(long, default_value = "none")]
    pub mutation: Mutation,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Output produced by a command, kept separate from printing for tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            code: EXIT_OK,
            stdout: String::new(),
            stderr: String::new(),
        }
    }

    fn io(msg: String) -> Outcome {
        Outcome {
            code: EXIT_IO,
            stdout: String::new(),
            stderr: format!("error: {}\n", msg),
        }
    }
}

/// ANSI styling, off unless stdout is a terminal and `ACT_COLOR` does not
/// disable it.
#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub color: bool,
}

impl Style {
    pub fn from_env() -> Style {
        let color = match std::env::var("ACT_COLOR").ok().as_deref() {
            Some("always") | Some("1") => true,
            Some(_) => false,
            None => std::io::stdout().is_terminal(),
        };
        Style { color }
    }

    pub fn plain() -> Style {
        Style { color: false }
    }

    fn paint(&self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{}m{}\x1b[0m", code, s)
        } else {
            s.to_string()
        }
    }

    fn red(&self, s: &str) -> String {
        self.paint("31;1", s)
    }

    fn green(&self, s: &str) -> String {
        self.paint("32", s)
    }

    fn yellow(&self, s: &str) -> String {
        self.paint("33", s)
    }
}

pub fn execute(cli: &Cli, style: Style) -> Outcome {
    match &cli.command {
        Command::Check(a) => cmd_check(a, style),
        Command::Obligations(a) => cmd_obligations(a, style),
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a, style),
        Command::Explore(a) => cmd_explore(a),
        Command::Metatheory(a) => cmd_metatheory(a),
    }
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = execute(&cli, Style::from_env());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path.display(), e))
}

/// Parses and type checks a source text.
fn load(src: &str) -> Result<Checked, Vec<Diagnostic>> {
    let spec = parser::parse_spec(src)?;
    typing::check_spec(&spec)
}

fn render_diags(file: &str, diags: &[Diagnostic], style: Style) -> String {
    let mut out = String::new();
    for d in diags {
        let line = d.render(file);
        out.push_str(&if d.is_error() { style.red(&line) } else { style.yellow(&line) });
        out.push('\n');
    }
    out
}

fn verdict_json(ob: &Obligation, v: &Verdict) -> Json {
    let mut j = json!({
        "rule": ob.rule,
        "owner": ob.owner,
        "line": ob.line,
        "col": ob.col,
        "hash": ob.hash,
        "summary": ob.summary(),
        "verdict": v.label(),
    });
    match v {
        Verdict::ValidWithinBounds { contexts } => {
            j["contexts"] = json!(contexts);
        }
        Verdict::Counterexample(c) => {
            let mut cj = json!({
                "assignment": c.assignment.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                "failedGoal": c.failed_goal,
                "pre": state_to_json(&c.pre),
                "rho": env_to_json(&c.rho),
                "loc": c.loc.map(|l| l.0.to_string()),
            });
            if let Some(p) = &c.post {
                cj["post"] = state_to_json(p);
            }
            if let Some(e) = &c.callee_env {
                cj["calleeEnv"] = env_to_json(e);
            }
            j["counterexample"] = cj;
        }
        Verdict::Unknown { reason } => {
            j["reason"] = json!(reason);
        }
    }
    j
}

/// Exit code for a list of verdicts: counterexamples and unknowns both
/// keep a spec from being accepted.
fn verdicts_code(vs: &[Verdict]) -> u8 {
    if vs.iter().all(Verdict::is_valid) {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    }
}

fn render_verdict(file: &str, ob: &Obligation, v: &Verdict, style: Style) -> String {
    match v {
        Verdict::ValidWithinBounds { contexts } => format!(
            "{} {} ({} contexts)\n",
            style.green("valid"),
            ob.summary(),
            contexts
        ),
        Verdict::Counterexample(c) => format!(
            "{}\n  counterexample: {}\n",
            style.red(&format!(
                "{}:{}:{}: error[{}]: obligation fails: {}",
                file,
                ob.line,
                ob.col,
                ob.rule,
                ob.summary()
            )),
            c.describe()
        ),
        Verdict::Unknown { reason } => format!(
            "{}\n  {}\n",
            style.yellow(&format!("{}:{}:{}: unknown[{}]: {}", file, ob.line, ob.col, ob.rule, ob.summary())),
            reason
        ),
    }
}

fn cmd_check(a: &CheckArgs, style: Style) -> Outcome {
    let mut out = Outcome::new();
    let cfg = a.bounds.config();
    let mut files = Vec::new();
    for path in &a.paths {
        let file = path.display().to_string();
        let src = match read(path) {
            Ok(s) => s,
            Err(e) => return Outcome::io(e),
        };
        let checked = match load(&src) {
            Ok(c) => c,
            Err(diags) => {
                out.code = out.code.max(EXIT_TYPE);
                if a.out.json {
                    files.push(json!({
                        "file": file,
                        "ok": false,
                        "diagnostics": diags.iter().map(|d| d.to_json(&file)).collect::<Vec<_>>(),
                        "obligations": [],
                    }));
                } else {
                    out.stdout.push_str(&render_diags(&file, &diags, style));
                }
                continue;
            }
        };
        if a.dump_sigma {
            out.stdout.push_str(&to_pretty(&checked.sigma));
        }
        if a.dump_typed {
            out.stdout.push_str(&to_pretty(&checked.spec));
        }
        if a.dump_obligations {
            out.stdout.push_str(&to_pretty(&checked.obligations));
        }
        if a.dump_prec {
            out.stdout.push_str(&wellfounded::build_prec(&checked.sigma).to_dot());
        }
        let verdicts = if a.assume_obligations {
            Vec::new()
        } else {
            entailment::discharge_all(&checked.sigma, &checked.obligations, &cfg)
        };
        let code = verdicts_code(&verdicts);
        out.code = out.code.max(code);
        if a.out.json {
            files.push(json!({
                "file": file,
                "ok": code == EXIT_OK,
                "diagnostics": [],
                "obligations": checked
                    .obligations
                    .iter()
                    .zip(&verdicts)
                    .map(|(ob, v)| verdict_json(ob, v))
                    .collect::<Vec<_>>(),
                "obligationsAssumed": a.assume_obligations,
            }));
        } else {
            for (ob, v) in checked.obligations.iter().zip(&verdicts) {
                if !v.is_valid() {
                    out.stdout.push_str(&render_verdict(&file, ob, v, style));
                }
            }
            let n = checked.obligations.len();
            let status = if a.assume_obligations {
                format!("{}: {} ({} obligations assumed)", file, style.green("ok"), n)
            } else if code == EXIT_OK {
                format!("{}: {} ({} obligations valid within bounds)", file, style.green("ok"), n)
            } else {
                let bad = verdicts.iter().filter(|v| !v.is_valid()).count();
                format!("{}: {} ({} of {} obligations not valid)", file, style.red("failed"), bad, n)
            };
            out.stdout.push_str(&status);
            out.stdout.push('\n');
        }
    }
    if a.out.json {
        out.stdout.push_str(&to_pretty(&json!({
            "schemaVersion": SCHEMA_VERSION,
            "command": "check",
            "ok": out.code == EXIT_OK,
            "files": files,
        })));
    }
    out
}

fn cmd_obligations(a: &ObligationsArgs, style: Style) -> Outcome {
    let mut out = Outcome::new();
    let file = a.path.display().to_string();
    let src = match read(&a.path) {
        Ok(s) => s,
        Err(e) => return Outcome::io(e),
    };
    let checked = match load(&src) {
        Ok(c) => c,
        Err(diags) => return type_errors(&file, &diags, a.out.json, style),
    };
    let verdicts = entailment::discharge_all(&checked.sigma, &checked.obligations, &a.bounds.config());
    out.code = verdicts_code(&verdicts);
    if a.out.json {
        let obs: Vec<Json> = checked
            .obligations
            .iter()
            .zip(&verdicts)
            .map(|(ob, v)| {
                let mut j = verdict_json(ob, v);
                if a.smt {
                    j["smt"] = match entailment::export::to_smtlib(&checked.sigma, ob) {
                        Ok(s) => json!(s),
                        Err(e) => json!({ "notExportable": e.0 }),
                    };
                }
                j
            })
            .collect();
        out.stdout = to_pretty(&json!({
            "schemaVersion": SCHEMA_VERSION,
            "command": "obligations",
            "file": file,
            "ok": out.code == EXIT_OK,
            "obligations": obs,
        }));
    } else {
        for (ob, v) in checked.obligations.iter().zip(&verdicts) {
            out.stdout.push_str(&render_verdict(&file, ob, v, style));
            if a.smt {
                match entailment::export::to_smtlib(&checked.sigma, ob) {
                    Ok(s) => out.stdout.push_str(&s),
                    Err(e) => out.stdout.push_str(&format!("; not exportable: {}\n", e.0)),
                }
            }
        }
        if checked.obligations.is_empty() {
            out.stdout.push_str("no obligations\n");
        }
    }
    out
}

fn type_errors(file: &str, diags: &[Diagnostic], as_json: bool, style: Style) -> Outcome {
    let stdout = if as_json {
        to_pretty(&json!({
            "schemaVersion": SCHEMA_VERSION,
            "ok": false,
            "file": file,
            "diagnostics": diags.iter().map(|d| d.to_json(file)).collect::<Vec<_>>(),
        }))
    } else {
        render_diags(file, diags, style)
    };
    Outcome {
        code: EXIT_TYPE,
        stdout,
        stderr: String::new(),
    }
}

/// Loads and checks a spec, discharging obligations unless assumed.
fn load_checked(path: &Path, bounds: &BoundArgs, assume: bool, as_json: bool, style: Style) -> Result<Checked, Outcome> {
    let file = path.display().to_string();
    let src = read(path).map_err(Outcome::io)?;
    let checked = load(&src).map_err(|d| type_errors(&file, &d, as_json, style))?;
    if !assume {
        let verdicts = entailment::discharge_all(&checked.sigma, &checked.obligations, &bounds.config());
        if verdicts_code(&verdicts) != EXIT_OK {
            let mut out = Outcome::new();
            out.code = EXIT_COUNTEREXAMPLE;
            for (ob, v) in checked.obligations.iter().zip(&verdicts) {
                if !v.is_valid() {
                    out.stderr.push_str(&render_verdict(&file, ob, v, Style::plain()));
                }
            }
            out.stderr.push_str("obligations do not hold; pass --assume-obligations to continue anyway\n");
            return Err(out);
        }
    }
    Ok(checked)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunJson {
    schema_version: u32,
    command: &'static str,
    ok: bool,
    step: StepLabel,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<Json>,
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<Json>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<FailureJson>,
}

#[derive(Serialize)]
struct FailureJson {
    kind: &'static str,
    message: String,
}

fn cmd_run(a: &RunArgs) -> Outcome {
    let file = a.path.display().to_string();
    let src = match read(&a.path) {
        Ok(s) => s,
        Err(e) => return Outcome::io(e),
    };
    let checked = match load(&src) {
        Ok(c) => c,
        Err(diags) => return type_errors(&file, &diags, a.out.json, Style::plain()),
    };
    let sigma = &checked.sigma;
    let (contract, transition) = match a.entry.split_once('.') {
        Some((c, t)) if t != "constructor" => (c.to_string(), Some(t.to_string())),
        Some((c, _)) => (c.to_string(), None),
        None => (a.entry.clone(), None),
    };
    let iface = match &transition {
        None => sigma.constructor(&contract).map(|c| c.iface.clone()),
        Some(t) => sigma.transition(&contract, t).map(|t| t.iface.clone()),
    };
    let Some(iface) = iface else {
        return Outcome::io(format!("no entry point `{}`", a.entry));
    };
    let state = match &a.state {
        None => State::empty(),
        Some(p) => {
            let text = match read(p) {
                Ok(t) => t,
                Err(e) => return Outcome::io(e),
            };
            let j: Json = match serde_json::from_str(&text) {
                Ok(j) => j,
                Err(e) => return Outcome::io(format!("{}: {}", p.display(), e)),
            };
            match state_from_json(sigma, &j) {
                Ok(s) => s,
                Err(e) => return Outcome::io(format!("{}: {}", p.display(), e)),
            }
        }
    };
    if let Err(e) = valuetyping::store_well_typed(sigma, &state) {
        return Outcome {
            code: EXIT_TYPE,
            stdout: String::new(),
            stderr: format!("error: input state is ill typed: {}\n", e),
        };
    }
    let args: Json = match serde_json::from_str(&a.args) {
        Ok(j) => j,
        Err(e) => return Outcome::io(format!("--args: {}", e)),
    };
    let rho = match env_from_json(&iface, &args) {
        Ok(r) => r,
        Err(e) => return Outcome::io(format!("--args: {}", e)),
    };
    if let Err(e) = valuetyping::env_has_iface(sigma, &state, &rho, &iface) {
        return Outcome {
            code: EXIT_TYPE,
            stdout: String::new(),
            stderr: format!("error: arguments are ill typed: {}\n", e),
        };
    }
    let loc = match (&transition, a.loc) {
        (Some(_), Some(l)) => Addr(l),
        (Some(_), None) => return Outcome::io("a transition needs --loc".into()),
        (None, _) => state.fresh(),
    };
    let label = StepLabel {
        contract,
        transition,
        loc,
        rho,
    };
    let interp = Interp::with_mutation(sigma, a.mutation);
    let result = crate::semantics::apply(&interp, &state, &label);
    let mut out = Outcome::new();
    let json = match &result {
        Ok((v, s2)) => RunJson {
            schema_version: SCHEMA_VERSION,
            command: "run",
            ok: true,
            step: label.clone(),
            value: Some(value_to_json(v)),
            state: Some(state_to_json(s2)),
            failure: None,
        },
        Err(e) => {
            out.code = EXIT_COUNTEREXAMPLE;
            RunJson {
                schema_version: SCHEMA_VERSION,
                command: "run",
                ok: false,
                step: label.clone(),
                value: None,
                state: None,
                failure: Some(FailureJson {
                    kind: e.kind(),
                    message: e.to_string(),
                }),
            }
        }
    };
    if a.out.json {
        out.stdout = to_pretty(&json);
    } else {
        out.stdout.push_str(&format!("step: {}\n", label));
        match &result {
            Ok((v, s2)) => {
                out.stdout.push_str(&format!("returned: {}\n", v));
                out.stdout.push_str(&to_pretty(&state_to_json(s2)));
            }
            Err(e) => out.stdout.push_str(&format!("failed: {} ({})\n", e, e.kind())),
        }
    }
    out
}

fn explore_config(b: &BoundArgs, e: &ExploreBoundArgs) -> ExploreConfig {
    ExploreConfig {
        max_depth: e.max_depth,
        max_states: e.max_states,
        bounds: b.config(),
        mutation: e.mutation,
    }
}

fn cmd_verify(a: &VerifyArgs, style: Style) -> Outcome {
    let checked = match load_checked(&a.path, &a.bounds, a.explore.assume_obligations, a.out.json, style) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let report = verifier::verify(&checked, &explore_config(&a.bounds, &a.explore));
    let mut out = Outcome::new();
    if !report.holds {
        out.code = EXIT_COUNTEREXAMPLE;
    }
    if a.out.json {
        out.stdout = to_pretty(&report);
    } else {
        out.stdout = report.render_human();
        out.stdout.push_str(&if report.holds {
            style.green("PASS")
        } else {
            style.red("FAIL")
        });
        out.stdout.push('\n');
    }
    out
}

fn cmd_explore(a: &ExploreArgs) -> Outcome {
    let checked = match load_checked(&a.path, &a.bounds, a.explore.assume_obligations, a.out.json, Style::plain()) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let exp = verifier::explore(&checked.sigma, &explore_config(&a.bounds, &a.explore));
    let mut out = Outcome::new();
    if a.out.json {
        let nodes: Vec<Json> = exp
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                json!({
                    "id": i,
                    "depth": n.depth,
                    "parent": n.parent.as_ref().map(|(p, _)| p),
                    "via": n.parent.as_ref().map(|(_, l)| serde_json::to_value(l).expect("labels serialize")),
                    "state": state_to_json(&n.state),
                })
            })
            .collect();
        let edges: Vec<Json> = exp
            .edges
            .iter()
            .map(|e| {
                json!({
                    "from": e.from,
                    "to": e.to,
                    "step": serde_json::to_value(&e.label).expect("labels serialize"),
                    "returned": value_to_json(&e.ret),
                })
            })
            .collect();
        out.stdout = to_pretty(&json!({
            "schemaVersion": SCHEMA_VERSION,
            "command": "explore",
            "maxDepth": exp.max_depth,
            "depthReached": exp.depth_reached,
            "truncated": exp.state_cap_hit || exp.frontier_left,
            "nodes": nodes,
            "edges": edges,
        }));
    } else {
        out.stdout.push_str(&format!(
            "{} states, {} steps, depth {} of {}{}\n",
            exp.nodes.len(),
            exp.edges.len(),
            exp.depth_reached,
            exp.max_depth,
            if exp.state_cap_hit || exp.frontier_left { ", truncated" } else { "" }
        ));
        for (i, n) in exp.nodes.iter().enumerate() {
            let via = match &n.parent {
                None => "initial".to_string(),
                Some((p, l)) => format!("from {} by {}", p, l),
            };
            out.stdout.push_str(&format!("state {} (depth {}, {})\n", i, n.depth, via));
        }
    }
    out
}

fn cmd_metatheory(a: &MetaArgs) -> Outcome {
    let cfg = MetaConfig {
        seed: a.seed,
        cases: a.cases,
        mutation: a.mutation,
        ..MetaConfig::default()
    };
    let report = metatheory::run(&cfg);
    let mut out = Outcome::new();
    if !report.passed {
        out.code = EXIT_TYPE;
    }
    out.stdout = if a.out.json {
        to_pretty(&report)
    } else {
        report.render_human()
    };
    out
}
