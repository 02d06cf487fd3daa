//! Abstract syntax: types, AST nodes and the pretty printer.

pub mod ast;
pub mod pretty;
pub mod types;

pub use ast::*;
pub use types::*;
