//! Cross-checks between the FPL histogram and the Hamiltonian ground state.

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::fpl::{asm_count, histogram, EnumerationLimits, PatternHistogram};
use crate::patterns::{join_neighbours, rank_of, PatternBasis};

use super::hamiltonian::{build_hamiltonian, HamiltonianLimits, SparseIntMatrix};
use super::perron::{perron_vector, KernelMethod, PerronFailure, PerronVector};
use super::power::{power_iteration, PowerIteration, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};

/// `sum_i sum_{p : h_i(p) = q} A(p)` for every pattern `q`, computed by
/// applying the operators to the histogram directly.
pub fn preimage_sums(hist: &PatternHistogram) -> Vec<u128> {
    let n = hist.n();
    let basis = PatternBasis::new(n).expect("histogram n is a valid pattern size");
    let mut out = vec![0u128; basis.len()];
    let mut scratch = Vec::with_capacity(2 * n);
    for (pattern, &count) in basis.patterns().iter().zip(hist.counts()) {
        for i in 0..2 * n {
            scratch.clear();
            scratch.extend_from_slice(pattern.zero_based());
            join_neighbours(&mut scratch, i);
            out[rank_of(&scratch) as usize] += u128::from(count);
        }
    }
    out
}

/// The preimage sum for a single target pattern.
pub fn preimage_sum(hist: &PatternHistogram, target: &crate::LinkPattern) -> u128 {
    preimage_sums(hist)[target.rank() as usize]
}

#[derive(Debug, Clone)]
pub struct SpectralRadiusCheck {
    /// First column whose sum differs from `2n`, with that sum.
    pub bad_column: Option<(usize, u64)>,
    pub power: PowerIteration,
    pub relative_error: f64,
    pub pass: bool,
}

/// Column sums must all equal `2n`, and power iteration must converge to a
/// Rayleigh quotient within `tolerance` (relative) of `2n`.
pub fn spectral_radius_check(h: &SparseIntMatrix, tolerance: f64, max_iterations: usize) -> SpectralRadiusCheck {
    let target = 2 * h.n() as u64;
    let bad_column = h.column_sums().into_iter().enumerate().find(|&(_, s)| s != target);
    let power = power_iteration(h, tolerance, max_iterations);
    let relative_error = (power.eigenvalue - target as f64).abs() / target as f64;
    let pass = bad_column.is_none() && power.converged && relative_error < tolerance;
    SpectralRadiusCheck { bad_column, power, relative_error, pass }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub workers: usize,
    pub enumeration: EnumerationLimits,
    pub hamiltonian: HamiltonianLimits,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            enumeration: EnumerationLimits::default(),
            hamiltonian: HamiltonianLimits::default(),
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub n: usize,
    pub pass: bool,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub perron: Option<PerronVector>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Enumerates, builds the Hamiltonian and runs every check for one `n`.
pub fn verify_conjecture(n: usize, options: VerifyOptions) -> Result<VerificationReport> {
    let h = build_hamiltonian(n, options.hamiltonian)?;
    let hist = histogram(n, options.workers, options.enumeration)?;
    Ok(verify_with(&hist, &h, options))
}

/// Runs every check on an already computed histogram and Hamiltonian.
pub fn verify_with(hist: &PatternHistogram, h: &SparseIntMatrix, options: VerifyOptions) -> VerificationReport {
    let n = hist.n();
    assert_eq!(h.n(), n, "histogram and Hamiltonian sizes differ");
    let basis = PatternBasis::new(n).expect("valid pattern size");
    let a_n = asm_count(n);
    let a_prev = if n > 1 { asm_count(n - 1) } else { BigUint::from(1u32) };
    let lambda = 2 * n as u64;
    let mut checks = Vec::new();
    let mut push = |name, pass, details| checks.push(Check { name, n, pass, details });

    push(
        "enumeration_total",
        BigUint::from(hist.total()) == a_n,
        json!({ "total": hist.total(), "expected": a_n.to_string() }),
    );

    let radius = spectral_radius_check(h, options.tolerance, options.max_iterations);
    push(
        "column_sums",
        radius.bad_column.is_none(),
        match radius.bad_column {
            None => json!({ "column_sum": lambda }),
            Some((col, sum)) => json!({ "column_sum": lambda, "first_bad_column": col, "sum": sum }),
        },
    );
    push(
        "power_iteration",
        radius.power.converged && radius.relative_error < options.tolerance,
        json!({
            "eigenvalue": radius.power.eigenvalue,
            "relative_error": radius.relative_error,
            "iterations": radius.power.iterations,
            "converged": radius.power.converged,
        }),
    );

    let perron = perron_vector(h);
    push(
        "perron_unique",
        perron.is_ok(),
        match &perron {
            Ok(p) => json!({
                "eigenvalue": lambda,
                "nullity": 1,
                "method": match p.method {
                    KernelMethod::Modular { primes } => format!("modular ({primes} primes)"),
                    KernelMethod::FractionFree => "fraction-free".to_string(),
                },
            }),
            Err(e @ PerronFailure::Degenerate { nullity, .. }) => {
                json!({ "eigenvalue": lambda, "nullity": nullity, "error": e.to_string() })
            }
            Err(e) => json!({ "eigenvalue": lambda, "error": e.to_string() }),
        },
    );

    let perron = perron.ok();
    match &perron {
        Some(p) => {
            let w = &p.vector;
            let mismatch = w.first_mismatch(hist.counts());
            push(
                "perron_equals_histogram",
                mismatch.is_none(),
                match mismatch {
                    None => json!({ "components": w.len() }),
                    Some(rank) => json!({
                        "first_mismatch": {
                            "rank": rank,
                            "pattern": basis.get(rank).to_string(),
                            "perron": w.components()[rank].to_string(),
                            "count": hist.get(rank),
                        }
                    }),
                },
            );
            let sum = w.sum();
            push(
                "component_sum",
                sum == BigInt::from(a_n.clone()),
                json!({ "sum": sum.to_string(), "expected": a_n.to_string() }),
            );
            let max = w.max().cloned().unwrap_or_default();
            let argmax: Vec<String> = w
                .components()
                .iter()
                .enumerate()
                .filter(|(_, x)| **x == max)
                .map(|(i, _)| basis.get(i).to_string())
                .collect();
            // Scale-free form of max = A_{n-1} under the normalization sum = A_n.
            let pass = &max * BigInt::from(a_n.clone()) == BigInt::from(a_prev.clone()) * &sum;
            push(
                "max_component",
                pass,
                json!({ "max": max.to_string(), "expected": a_prev.to_string(), "attained_at": argmax }),
            );
            let min = w.min().cloned().unwrap_or_default();
            push("min_component", min == BigInt::from(1), json!({ "min": min.to_string() }));
        }
        None => {
            for name in ["perron_equals_histogram", "component_sum", "max_component", "min_component"] {
                push(name, false, json!({ "error": "no Perron vector" }));
            }
        }
    }

    let sums = preimage_sums(hist);
    let bad = (0..basis.len()).find(|&r| sums[r] != u128::from(lambda) * u128::from(hist.get(r)));
    push(
        "preimage_sum_identity",
        bad.is_none(),
        match bad {
            None => json!({ "patterns": basis.len() }),
            Some(r) => json!({
                "first_violation": {
                    "rank": r,
                    "pattern": basis.get(r).to_string(),
                    "preimage_sum": sums[r].to_string(),
                    "expected": (u128::from(lambda) * u128::from(hist.get(r))).to_string(),
                }
            }),
        },
    );

    for (name, perm) in [
        ("rotation_invariance", basis.rotation_permutation()),
        ("reflection_invariance", basis.reflection_permutation()),
    ] {
        let bad = (0..basis.len()).find(|&r| hist.get(perm[r]) != hist.get(r));
        push(
            name,
            bad.is_none(),
            match bad {
                None => json!({ "patterns": basis.len() }),
                Some(r) => json!({
                    "first_violation": {
                        "pattern": basis.get(r).to_string(),
                        "image": basis.get(perm[r]).to_string(),
                        "count": hist.get(r),
                        "image_count": hist.get(perm[r]),
                    }
                }),
            },
        );
    }

    let pass = checks.iter().all(|c| c.pass);
    VerificationReport { n, pass, checks, perron }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LinkPattern;

    #[test]
    fn small_n_pass() {
        for n in 1..=5 {
            let report = verify_conjecture(n, VerifyOptions::default()).unwrap();
            assert!(report.pass, "n = {n}: {}", report.to_json());
        }
    }

    #[test]
    fn preimage_sums_small() {
        let h1 = histogram(1, 1, EnumerationLimits::default()).unwrap();
        assert_eq!(preimage_sums(&h1), vec![2]);
        let h4 = histogram(4, 1, EnumerationLimits::default()).unwrap();
        let target = LinkPattern::all_adjacent(4).unwrap();
        assert_eq!(preimage_sum(&h4, &target), 56);
    }

    #[test]
    fn tampered_histogram_is_reported() {
        let hist = histogram(4, 1, EnumerationLimits::default()).unwrap();
        let mut counts = hist.counts().to_vec();
        counts[3] += 1;
        counts[5] -= 1;
        let bad = PatternHistogram::new(4, counts).unwrap();
        let h = build_hamiltonian(4, HamiltonianLimits::default()).unwrap();
        let report = verify_with(&bad, &h, VerifyOptions::default());
        assert!(!report.pass);
        let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
        assert!(failed.contains(&"perron_equals_histogram"));
        assert!(failed.contains(&"preimage_sum_identity"));
        assert!(!failed.contains(&"component_sum"));
        let detail = &report.check("perron_equals_histogram").unwrap().details;
        assert_eq!(detail["first_mismatch"]["rank"], 3);
    }
}
