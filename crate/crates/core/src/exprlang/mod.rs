//! Expression language for `Φ` and the map `E`, evaluated over the extended
//! reals, and the composition `Ψ(t, u) = Φ(E(t, u))`.

mod ast;
mod compose;
mod extreal;
mod parse;

use thiserror::Error;

pub use ast::{BinOp, CmpOp, Condition, Env, Expr, Func, Var};
pub use compose::{compose_sources, ComposeError, ComposedFunction, MapExpr, Stage};
pub use extreal::{ExtReal, OVERFLOW_THRESHOLD};
pub use parse::parse;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("`{name}` at offset {offset} called with {found} argument(s)")]
    Arity {
        offset: usize,
        name: String,
        found: usize,
    },
    #[error("comparison at offset {offset} is only allowed as a piecewise condition")]
    MisplacedCondition { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Empty => 0,
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::Arity { offset, .. }
            | ParseError::MisplacedCondition { offset } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("domain error in `{op}`: {detail}")]
    Domain { op: &'static str, detail: &'static str },
    #[error("variable `{}` is not bound", .0.name())]
    Unbound(Var),
    #[error("`{0}` called with the wrong number of arguments")]
    Arity(&'static str),
}

impl EvalError {
    pub(crate) fn domain(op: &'static str, detail: &'static str) -> Self {
        EvalError::Domain { op, detail }
    }
}
