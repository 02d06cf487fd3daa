//! Entailment side conditions produced while type checking.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::span::Span;
use crate::syntax::{Expr, Param, SlotExpr};

/// The context `Σ; I; Φ ⊨_{A?}` an obligation is stated in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObligationContext {
    /// Number of contracts whose storage was in Σ when the obligation was emitted.
    pub sigma_len: usize,
    pub iface: Vec<Param>,
    /// Conjuncts of the path condition Φ.
    pub phi: Vec<Expr>,
    pub contract: Option<String>,
    /// Goals mention `pre`/`post` and are read over a pair of states.
    pub timed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum ObligationKind {
    /// `Σ; I; Φ ⊨ ē`
    Exprs { goals: Vec<Expr> },
    /// `Σ; I; Φ ⊨ (se_1 … se_n, pre′)` for a `new callee(…)`.
    Iffs {
        callee: String,
        args: Vec<SlotExpr>,
        value: Option<SlotExpr>,
        binder: Vec<Param>,
        goals: Vec<Expr>,
    },
}

impl ObligationKind {
    pub fn goals(&self) -> &[Expr] {
        match self {
            ObligationKind::Exprs { goals } | ObligationKind::Iffs { goals, .. } => goals,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Obligation {
    /// Rule whose premise produced the obligation.
    pub rule: String,
    /// `Contract.constructor` or `Contract.transition`.
    pub owner: String,
    #[serde(skip)]
    pub span: Span,
    pub line: u32,
    pub col: u32,
    pub context: ObligationContext,
    pub kind: ObligationKind,
    /// Content hash over rule, owner, context and kind; independent of spans.
    pub hash: String,
}

#[derive(Serialize)]
struct Hashed<'a> {
    rule: &'a str,
    owner: &'a str,
    context: &'a ObligationContext,
    kind: &'a ObligationKind,
}

impl Obligation {
    pub fn new(rule: &str, owner: &str, span: Span, context: ObligationContext, kind: ObligationKind) -> Obligation {
        let hashed = Hashed {
            rule,
            owner,
            context: &context,
            kind: &kind,
        };
        let bytes = serde_json::to_vec(&hashed).expect("obligations serialize");
        let digest = Sha256::digest(&bytes);
        Obligation {
            rule: rule.to_string(),
            owner: owner.to_string(),
            span,
            line: span.line,
            col: span.col,
            context,
            kind,
            hash: hex::encode(&digest[..8]),
        }
    }

    /// One-line human rendering.
    pub fn summary(&self) -> String {
        let goals: Vec<String> = self.kind.goals().iter().map(|g| g.to_string()).collect();
        let phi: Vec<String> = self.context.phi.iter().map(|g| g.to_string()).collect();
        let phi = if phi.is_empty() { "true".to_string() } else { phi.join(" and ") };
        match &self.kind {
            ObligationKind::Exprs { .. } => {
                format!("[{}] {} under {}: {}", self.rule, self.owner, phi, goals.join(", "))
            }
            ObligationKind::Iffs { callee, args, .. } => {
                let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                format!(
                    "[{}] {} under {}: iff of {}({}) holds: {}",
                    self.rule,
                    self.owner,
                    phi,
                    callee,
                    args.join(", "),
                    goals.join(", ")
                )
            }
        }
    }
}
