use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit-count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not unitary within tolerance {tol:e} (max deviation {deviation:e})")]
    NotUnitary { tol: f64, deviation: f64 },

    #[error("{what} supports at most {limit}, requested {requested}")]
    CapabilityExceeded {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("subgroup rank mismatch: expected {expected} independent generators, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("subgroup is not abelian: generators {i} and {j} anticommute")]
    NonAbelian { i: usize, j: usize },

    #[error("one-bit teleportation requires a semi-Clifford gate (no witness found)")]
    SchemeInapplicable,

    #[error("state cap {cap} exceeded while expanding the teleportation chain ({seen} states so far)")]
    StateCapExceeded { cap: usize, seen: usize },

    #[error("inconsistent witness: {0}")]
    InconsistentWitness(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
