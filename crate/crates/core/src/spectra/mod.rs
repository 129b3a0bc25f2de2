//! The Hamiltonian on link patterns and its exact ground state.

mod bareiss;
mod hamiltonian;
mod modular;
mod perron;
mod power;
mod vector;
mod verify;

pub use bareiss::{integer_kernel, integer_rank};
pub use hamiltonian::{build_hamiltonian, HamiltonianLimits, SparseIntMatrix, DEFAULT_MAX_DIM};
pub use perron::{
    perron_vector, perron_vector_fraction_free, KernelMethod, PerronFailure, PerronVector, FRACTION_FREE_MAX_DIM,
};
pub use power::{power_iteration, PowerIteration, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};
pub use vector::BigIntVector;
pub use verify::{
    preimage_sum, preimage_sums, spectral_radius_check, verify_conjecture, verify_with, Check, SpectralRadiusCheck,
    VerificationReport, VerifyOptions,
};
