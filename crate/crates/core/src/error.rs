//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the library. Zero products of orbit sets are values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("composition of differentials is nonzero")]
    CompositionNonzero,
    #[error("map does not commute with the differentials: {0}")]
    NotChainMap(String),
    #[error("f' and g' both vanish at parameter {0}")]
    DegenerateDirection(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("orbit is degenerate: n*r = {0} is an integer")]
    DegenerateOrbit(String),
    #[error("no index convention for {orbit}^{cover}")]
    MissingConvention { orbit: String, cover: u32 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("not stabilized: {0}")]
    NotStabilized(String),
    #[error("filtration direction violated: {0}")]
    DirectionViolated(String),
    #[error("claim {name} failed: {counterexample}")]
    ClaimFailed { name: String, counterexample: String },
    #[error("model generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
