use std::path::PathBuf;

use crate::rational::Rat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("square root of negative integer {0}")]
    NegativeRoot(String),

    #[error("{0} is not the square of a rational")]
    NotASquare(Rat),

    #[error("cannot parse {input:?} as a fraction: {reason}")]
    Parse { input: String, reason: &'static str },

    #[error("singular curve: J^2 = K^3 + ({a})K^2 + ({b})K")]
    SingularCurve { a: Rat, b: Rat },

    #[error("point ({k}, {j}) is not on the curve")]
    NotOnCurve { k: Rat, j: Rat },

    #[error("two-torsion point with K = 0 has no back-map")]
    TwoTorsion,

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("quartic leading coefficient {0} is not a square")]
    NonSquareLead(Rat),

    #[error("degenerate descent: quartic minus matched square has no linear term")]
    DegenerateDescent,

    #[error("anchor ({f0}, {e0}) is not on the conic")]
    BadAnchor { f0: Rat, e0: Rat },

    #[error("line through the anchor is parallel to an asymptote (g^2 = {0})")]
    ParallelSlope(Rat),

    #[error("descent returned the trivial solution x = 0")]
    TrivialSolution,

    #[error("degenerate tuple: {0}")]
    Degenerate(String),

    #[error("wrong arity: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("checkpoint {path} was written for config {found}, current config is {expected}")]
    ConfigMismatch {
        path: PathBuf,
        found: String,
        expected: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
