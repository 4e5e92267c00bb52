//! Constrained spin chains as graphs of many-body Hilbert space, with the
//! diagnostics used to study wave-function revivals on them: effective
//! tight-binding reductions, forward-scattering subspaces, symmetry-resolved
//! spectra, transfer-matrix dimension counting and random daisy-cube
//! sampling.

pub mod basis;
pub mod chains;
pub mod dynamics;
pub mod error;
pub mod fsa;
pub mod graph;
pub mod linalg;
pub mod sampler;
pub mod spectral;
pub mod symmetry;

pub use basis::{
    enumerate_basis, hilbert_dimension, quantum_dimension, Basis, Boundary, ConstraintSpec,
    ModelFamily, SpinConfig,
};
pub use error::{Result, ScarError};
pub use graph::{build_adjacency, SparseOperator};
