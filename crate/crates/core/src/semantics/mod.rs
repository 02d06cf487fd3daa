//! Pointer semantics: values, states, big-step evaluation and one-step
//! reachability.

pub mod eval;
pub mod serial;
pub mod state;
pub mod step;
pub mod value;

pub use eval::{int_op, EvalError, EvalResult, Interp, Mutation};
pub use state::{Env, Instance, State, TimedState, Timing};
pub use step::{apply, step, Failure, Step, StepLabel, Successors};
pub use value::{default_base, default_of, Addr, Key, KeySort, MapValue, Value};
