//! Clifford-hierarchy laboratory: exact Pauli/Clifford algebra, recursive
//! hierarchy-level classification, semi-Clifford and generalized
//! semi-Clifford detection with explicit diagonalizing sandwiches, the
//! counterexample gate families, and gate-teleportation depth computation
//! (closed forms, exact absorbing-chain solves, Monte Carlo).

pub mod clifford;
pub mod depth;
pub mod error;
pub mod gates;
pub mod hierarchy;
pub mod matrix;
pub mod pauli;
pub mod phase_fn;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
pub use hierarchy::{Hierarchy, HierarchyLevel};
pub use matrix::DenseUnitary;
pub use pauli::{PauliOp, PauliSubgroup};

/// Library version string echoed into experiment records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
