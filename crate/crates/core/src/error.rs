use thiserror::Error;

use crate::pollard::PollardCheck;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus q={0} must be at least 2")]
    InvalidModulus(i64),
    #[error("digit count m={0} must be at least 2")]
    DegenerateM(i64),
    #[error("m={m} does not divide q={q}")]
    MDoesNotDivideQ { q: i64, m: i64 },
    #[error("expected {expected} distinct elements, got {got}")]
    WrongCardinality { expected: i64, got: usize },
    #[error("residue class {residue} mod {m} is hit more than once")]
    NotCompleteResidueSystem { m: i64, residue: i64 },
    #[error("{c} is not a unit modulo {q}")]
    NotAUnit { c: i64, q: i64 },
    #[error("operation requires a modular domain")]
    NotModular,
    #[error("{target} is not the full prime-power part of {q}")]
    BadTarget { q: i64, target: i64 },
    #[error("sets live in different domains")]
    DomainMismatch,
    #[error("t={t} outside 1..={max}")]
    BadT { t: u64, max: u64 },
    #[error("neither set has the Chowla property; Pollard's inequality is not guaranteed")]
    ChowlaViolation(Box<PollardCheck>),
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("search space of {size} candidates exceeds budget {budget}")]
    SpaceTooLarge { size: u128, budget: u64 },
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("witness does not re-validate: {0}")]
    Revalidation(String),
}
