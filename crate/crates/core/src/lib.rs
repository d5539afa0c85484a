//! Heisenberg-Weyl displacement algebra for qudit registers and truncated
//! bosonic modes.
//!
//! The crate expresses SWAP, transpose and partial transpose as averages of
//! displacement operators and builds the measures that follow from them:
//! Renyi-2 entanglement entropy from single-copy expectations, negativity,
//! the stabilizer Renyi entropy of qudit states, and the differential entropy
//! of the Weyl function of a continuous-variable state. Every identity comes
//! with a brute-force counterpart used by the test suite.
//!
//! All logarithms are natural. Basis states are ordered big-endian.

pub mod algebra;
pub mod cv;
pub mod entanglement;
pub mod error;
pub mod magic;
pub mod par;
pub mod state;
pub mod swap;

pub use algebra::{
    adjoint_index, apply_displacement, compose, displacement_matrix, expectation, DimSpec,
    DisplacementOp, Phase, PhasePoint,
};
pub use error::{Error, Result};
pub use par::Exec;
pub use state::{
    inner, random_state, reduced_density, tensor, DensityMatrix, Partition, StateVector,
};
