//! Expression parsing, evaluation and exact differentiation.

mod calculus;
mod eval;
mod expr;
mod map;
mod parse;
mod sample;

pub use eval::{apply_binary, apply_unary, Env, Positional};
pub use expr::{marker_key, BinaryOp, Expr, UnaryOp};
pub use map::{finite_diff, SmoothMap};
pub use parse::parse_expr;
pub use sample::{derivative_check, random_smooth_expr};
