use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system parameters: {}", join(.0))]
    InvalidParams(Vec<Violation>),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("round index {s} out of range 0..={horizon}")]
    RoundOutOfRange { s: usize, horizon: usize },

    #[error("data collector {0} is not legitimate for this instance")]
    IllegitimateCollector(String),

    #[error("cut has infinite capacity")]
    InfiniteCut,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("cannot parse fraction {0:?}")]
    ParseFraction(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
