//! Shared inputs for the benchmarks.

use linkcount::spectra::{build_hamiltonian, HamiltonianLimits, SparseIntMatrix};
use linkcount::{EnumerationLimits, PatternBasis};

pub fn hamiltonian(n: usize) -> SparseIntMatrix {
    build_hamiltonian(n, HamiltonianLimits::default()).expect("n within the default ceiling")
}

pub fn basis(n: usize) -> PatternBasis {
    PatternBasis::new(n).expect("valid n")
}

pub fn limits() -> EnumerationLimits {
    EnumerationLimits::default()
}
