use thiserror::Error;

use crate::poly::ParseError;

/// Which resource cap tripped inside the Gröbner engine or the chain algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resource {
    /// Number of S-pairs reduced by Buchberger.
    PairBudget,
    /// Total degree of an intermediate polynomial.
    DegreeCap,
}

impl std::fmt::Display for Resource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Resource::PairBudget => f.write_str("S-pair budget"),
            Resource::DegreeCap => f.write_str("degree cap"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomials belong to different symbol universes")]
    UniverseMismatch,
    #[error("symbol `{0}` is not bound")]
    UnboundSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),
    #[error("monomial order is not an elimination order for the parameters")]
    NotEliminationOrder,
    #[error("template is not linear in its parameters: {0}")]
    NonLinearTemplate(String),
    #[error("resource cap exceeded: {resource} (limit {limit})")]
    ResourceCap { resource: Resource, limit: usize },
    #[error("iteration cap of {0} exceeded before the chains stabilized")]
    IterationCap(usize),
    #[error("{0}")]
    ModeViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
