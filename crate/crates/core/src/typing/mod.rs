//! Type checking: builds Σ contract by contract, fills annotations and
//! collects entailment obligations.

mod check;
pub mod obligation;
pub mod state;

pub use check::{more_specific_or_equal, Checker, Ctx, Tag};
pub use obligation::{Obligation, ObligationContext, ObligationKind};
pub use state::{Layout, TypingState};

use crate::diagnostic::Diagnostic;
use crate::syntax::{Contract, Spec};

/// Result of checking a whole spec.
#[derive(Debug, Clone)]
pub struct Checked {
    pub sigma: TypingState,
    /// The input with every reference and mapping literal annotated.
    pub spec: Spec,
    pub obligations: Vec<Obligation>,
}

/// `⊢ spec : Σ`. Contracts are checked left to right, each against the Σ
/// built from the ones before it. Checking stops at the first failing contract.
pub fn check_spec(spec: &Spec) -> Result<Checked, Vec<Diagnostic>> {
    let mut sigma = TypingState::new();
    let mut checker = Checker::new();
    let mut out = spec.clone();
    for c in out.contracts.iter_mut() {
        sigma = checker.check_contract(&sigma, c)?;
    }
    Ok(Checked {
        sigma,
        spec: out,
        obligations: checker.obligations,
    })
}

/// `Σ ⊢ contract : Σ'` on its own, for incremental use.
pub fn check_contract(sigma: &TypingState, contract: &Contract) -> Result<(TypingState, Contract, Vec<Obligation>), Vec<Diagnostic>> {
    let mut checker = Checker::new();
    let mut c = contract.clone();
    let sigma = checker.check_contract(sigma, &mut c)?;
    Ok((sigma, c, checker.obligations))
}
