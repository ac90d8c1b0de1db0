//! Tense logic with future (`F`) and past (`P`) operators over finite frames.

mod eval;
mod formula;
mod frame;
mod parse;

pub use eval::{holds, holds_at, Evaluator};
pub use formula::{formula_size, normalize, Formula, Proposition};
pub use frame::{is_confluent, is_transitive, KripkeFrame, KripkeModel};
pub use parse::{parse_formula, print_formula};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("line {line}: {msg}")]
    ModelFormat { line: usize, msg: String },
}
