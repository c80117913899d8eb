use crate::model::ModelError;
use crate::parser::ParseError;
use crate::semantics::EvalError;

/// Any failure surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid model at {0}")]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("resource limit: {what} needs {needed}, budget allows {allowed}{}", frontier_note(.frontier))]
    ResourceLimit {
        what: String,
        needed: u64,
        allowed: u64,
        /// Largest world count whose search space was fully covered.
        frontier: Option<usize>,
    },
    #[error("invalid search specification: {0}")]
    InvalidSpec(String),
}

fn frontier_note(frontier: &Option<usize>) -> String {
    match frontier {
        Some(k) => format!(" (searched exhaustively up to {k} worlds)"),
        None => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
