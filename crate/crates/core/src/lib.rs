//! Fully packed loop enumeration and the dense O(1) loop model.
//!
//! The crate counts fully packed loop configurations on an `n x n` grid by
//! the link pattern they induce on the boundary, builds the loop-model
//! Hamiltonian `H = sum h_i` on the space of link patterns, extracts its
//! Perron eigenvector exactly, and checks the two against each other.

pub mod error;
pub mod fpl;
pub mod patterns;
pub mod spectra;
pub mod stochastic;

pub use error::{Error, Result};
pub use fpl::{asm_count, histogram, AsmMatrix, EnumerationLimits, FplState, PatternHistogram};
pub use patterns::{catalan, enumerate_patterns, LinkPattern, PatternBasis};
pub use spectra::{build_hamiltonian, perron_vector, verify_conjecture, BigIntVector, SparseIntMatrix, VerificationReport};
pub use stochastic::{player_a_probability, player_b_probability, sample_stationary, PatternDistribution};
