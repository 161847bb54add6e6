use thiserror::Error;

use crate::algebra::VarId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("variable {0} has no value")]
    UnboundVariable(VarId),

    #[error("k = {k} is out of range for a multiset of {n} elements")]
    BadK { k: usize, n: usize },

    #[error("composition has {parts} parts but the multiset has only {n} elements")]
    TooManyParts { parts: usize, n: usize },

    #[error("argument out of range: {0}")]
    BadRange(String),

    #[error("equation {0} is not linear in its pivot S{0}")]
    NonLinearPivot(u32),

    #[error("power sums must be centred (S1 = 0), got S1 = {0}")]
    NotCentred(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("a multiset needs at least one element")]
    EmptyMultiset,

    #[error("invalid search spec: {0}")]
    BadSpec(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
