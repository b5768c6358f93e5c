//! Problem files and expressions.

mod emit;
pub mod expr;
mod lexer;
mod problem;

pub use emit::emit_problem;
pub use expr::{parse_expression, parse_polynomial};
pub use problem::{parse_problem_file, Mode, ProblemSpec, SystemSpec};
