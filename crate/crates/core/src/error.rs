use thiserror::Error;

use crate::qring::RingSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring x^2 = {m}x {eps:+}: {reason}")]
    InvalidRing { m: i64, eps: i64, reason: &'static str },

    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("empty window: {0}")]
    EmptyWindow(String),

    #[error("cannot scale a window by zero")]
    ZeroScale,

    #[error("inverted range: lower bound {lo} exceeds upper bound {hi}")]
    InvertedRange { lo: String, hi: String },

    #[error("need at least two points to form tiles, found {0}")]
    TooFewPoints(usize),

    #[error("{x} is not a member of the point set with window {window}")]
    NotMember { x: String, window: String },

    #[error("grading must be at least 1")]
    ZeroGrading,

    #[error("operation requires the golden-mean ring, got {0}")]
    NotFibonacci(RingSpec),

    #[error("invalid generator J[a={a},m={m}]: {reason}")]
    InvalidGenerator { a: u32, m: String, reason: String },

    #[error("closure defect: {left} * {right} lands on J[a={a},m={m}], which is not a valid generator ({reason})")]
    ClosureDefect { left: String, right: String, a: u32, m: String, reason: String },

    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("window {0} is not of the form [a,b] with a*b >= 0")]
    UnsupportedWindow(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
