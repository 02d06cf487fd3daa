//! Parser, type checker, operational semantics and bounded verifier for the
//! act contract specification language.

pub mod cli;
pub mod diagnostic;
pub mod entailment;
pub mod json;
pub mod metatheory;
pub mod parser;
pub mod span;
pub mod syntax;
pub mod semantics;
pub mod typing;
pub mod verifier;
pub mod wellfounded;
pub mod valuetyping;
