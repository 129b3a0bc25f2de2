//! Fully packed loop states, their ASMs and link-pattern histograms.

mod asm;
mod enumerate;
mod histogram;
mod render;
mod state;

use num_bigint::BigUint;
use num_traits::One;

pub use asm::{read_asm_blocks, write_asm_blocks, AsmMatrix};
pub use enumerate::{enumerate_states, EnumerationLimits, Prefix, StateEnumerator, States, DEFAULT_MAX_GRID};
pub use histogram::{histogram, PatternHistogram, FORMAT_VERSION};
pub use render::{render_state_ascii, render_pattern_svg};
pub use state::{FplState, Stub, MAX_GRID};

/// Number of `n x n` alternating-sign matrices, from the product formula
/// `A_n = prod_{k=0}^{n-1} (3k+1)! / (n+k)!`. `A_0 = 1`.
pub fn asm_count(n: usize) -> BigUint {
    let factorial = |m: usize| -> BigUint { (1..=m).fold(BigUint::one(), |acc, i| acc * BigUint::from(i)) };
    let mut numerator = BigUint::one();
    let mut denominator = BigUint::one();
    for k in 0..n {
        numerator *= factorial(3 * k + 1);
        denominator *= factorial(n + k);
    }
    numerator / denominator
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asm_counts() {
        let known = [1u64, 1, 2, 7, 42, 429, 7436, 218_348, 10_850_216, 911_835_460];
        for (n, &a) in known.iter().enumerate() {
            assert_eq!(asm_count(n), BigUint::from(a), "n = {n}");
        }
    }
}
