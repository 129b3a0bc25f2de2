//! The random-operator Markov chain on link patterns.
//!
//! One step picks `i` uniformly from `1..=2n` and applies `h_i`, so the
//! transition matrix is `H / 2n`. Exact probabilities use big rationals;
//! floats appear only in sampling reports.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpl::PatternHistogram;
use crate::patterns::{catalan, LinkPattern, PatternBasis};
use crate::spectra::BigIntVector;

/// Seeded random source for the chain: SplitMix64, whose output sequence
/// is fixed by the seed on every platform.
#[derive(Debug, Clone)]
pub struct ChainRng(SplitMix64);

impl ChainRng {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..m` by rejection, so no value is favoured.
    pub fn below(&mut self, m: u64) -> u64 {
        assert!(m > 0, "empty range");
        // Reject the lowest 2^64 mod m raw values.
        let threshold = m.wrapping_neg() % m;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % m;
            }
        }
    }
}

/// Seed of the `k`-th parallel chain.
pub fn chain_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Applies a uniformly chosen `h_i` to `pattern`.
pub fn chain_step(pattern: &LinkPattern, rng: &mut ChainRng) -> LinkPattern {
    let i = rng.below(pattern.points() as u64) as usize + 1;
    pattern.apply_h(i).expect("operator index in range")
}

/// A probability law on the patterns of one `n`, indexed by rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternDistribution {
    n: usize,
    probabilities: Vec<BigRational>,
}

impl PatternDistribution {
    /// Normalizes nonnegative weights indexed by rank.
    pub fn from_weights(n: usize, weights: &[BigInt]) -> Result<Self> {
        let dim = catalan(n)? as usize;
        if weights.len() != dim {
            return Err(Error::Histogram(format!("expected {dim} weights, got {}", weights.len())));
        }
        let total: BigInt = weights.iter().sum();
        if total.is_zero() || weights.iter().any(|w| w < &BigInt::zero()) {
            return Err(Error::Histogram("weights must be nonnegative with a positive sum".into()));
        }
        let probabilities = weights.iter().map(|w| BigRational::new(w.clone(), total.clone())).collect();
        Ok(Self { n, probabilities })
    }

    /// `A(p) / A_n` from the FPL counts.
    pub fn from_histogram(hist: &PatternHistogram) -> Self {
        let weights: Vec<BigInt> = hist.counts().iter().map(|&c| BigInt::from(c)).collect();
        Self::from_weights(hist.n(), &weights).expect("histogram is a valid law")
    }

    pub fn from_vector(n: usize, vector: &BigIntVector) -> Result<Self> {
        Self::from_weights(n, vector.components())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probabilities(&self) -> &[BigRational] {
        &self.probabilities
    }

    pub fn get(&self, rank: usize) -> &BigRational {
        &self.probabilities[rank]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probabilities.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// One step of the chain applied to this law.
    pub fn step(&self) -> Self {
        let basis = PatternBasis::new(self.n).expect("valid n");
        let size = 2 * self.n;
        let table = basis.operator_table();
        let weight = BigRational::new(BigInt::from(1), BigInt::from(size));
        let mut out = vec![BigRational::zero(); self.len()];
        for (from, p) in self.probabilities.iter().enumerate() {
            let share = p * &weight;
            for &to in &table[from * size..(from + 1) * size] {
                out[to as usize] += &share;
            }
        }
        Self { n: self.n, probabilities: out }
    }
}

/// Player A's chance: a uniformly random FPL state has link pattern `target`.
pub fn player_a_probability(hist: &PatternHistogram, target: &LinkPattern) -> BigRational {
    BigRational::new(BigInt::from(hist.count_of(target)), BigInt::from(hist.total()))
}

/// One term of player B's chance: the starting pattern, its probability and
/// how many of the `2n` operators send it to the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerBTerm {
    pub pattern: LinkPattern,
    pub probability: BigRational,
    pub hits: usize,
}

/// Nonzero terms of player B's sum, in rank order.
pub fn player_b_terms(hist: &PatternHistogram, target: &LinkPattern) -> Vec<PlayerBTerm> {
    let basis = PatternBasis::new(hist.n()).expect("valid n");
    let total = BigInt::from(hist.total());
    basis
        .patterns()
        .iter()
        .filter_map(|p| {
            let hits = (1..=p.points()).filter(|&i| p.apply_h(i).expect("in range") == *target).count();
            (hits > 0).then(|| PlayerBTerm {
                pattern: p.clone(),
                probability: BigRational::new(BigInt::from(hist.count_of(p)), total.clone()),
                hits,
            })
        })
        .collect()
}

/// Player B's chance: a random state's pattern, hit by a uniformly chosen
/// `h_i`, lands on `target`.
pub fn player_b_probability(hist: &PatternHistogram, target: &LinkPattern) -> BigRational {
    let size = BigInt::from(2 * hist.n());
    player_b_terms(hist, target)
        .into_iter()
        .map(|t| t.probability * BigRational::new(BigInt::from(t.hits), size.clone()))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// First rank where one exact chain step changes the law, if any.
pub fn stationarity_defect(law: &PatternDistribution) -> Option<usize> {
    let next = law.step();
    (0..law.len()).find(|&r| next.get(r) != law.get(r))
}

/// True when every pattern reaches every other under the chain.
pub fn is_strongly_connected(n: usize) -> Result<bool> {
    let basis = PatternBasis::new(n)?;
    let size = 2 * n;
    let table = basis.operator_table();
    let dim = basis.len();
    let mut reverse = vec![Vec::new(); dim];
    for from in 0..dim {
        for &to in &table[from * size..(from + 1) * size] {
            reverse[to as usize].push(from as u32);
        }
    }
    let forward = |v: usize| table[v * size..(v + 1) * size].to_vec();
    let backward = |v: usize| reverse[v].clone();
    Ok(reaches_all(dim, forward) && reaches_all(dim, backward))
}

fn reaches_all(dim: usize, next: impl Fn(usize) -> Vec<u32>) -> bool {
    let mut seen = vec![false; dim];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for w in next(v) {
            let w = w as usize;
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == dim
}

/// First pattern with no operator fixing it, if any.
pub fn missing_self_loop(n: usize) -> Result<Option<LinkPattern>> {
    let basis = PatternBasis::new(n)?;
    Ok(basis.patterns().iter().find(|p| p.adjacent_arcs() == 0).cloned())
}

/// Sampled pattern counts, indexed by rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    pub n: usize,
    pub counts: Vec<u64>,
}

impl EmpiricalDistribution {
    pub fn samples(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.samples() as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// Total-variation distance `1/2 sum |f - p|` to an exact law.
    pub fn tv_distance(&self, law: &PatternDistribution) -> f64 {
        let exact = law.to_f64();
        0.5 * self.frequencies().iter().zip(&exact).map(|(f, p)| (f - p).abs()).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleOptions {
    pub burn_in: u64,
    pub samples: u64,
    pub seed: u64,
    /// Independent chains; samples are split as evenly as possible.
    pub chains: usize,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self { burn_in: 1_000, samples: 1_000_000, seed: 0, chains: 1 }
    }
}

/// Runs one chain from the rank-0 pattern, recording one sample per step
/// after the burn-in.
fn run_chain(n: usize, table: &[u32], burn_in: u64, samples: u64, seed: u64) -> Vec<u64> {
    let size = 2 * n;
    let mut rng = ChainRng::new(seed);
    let mut counts = vec![0u64; table.len() / size];
    let mut state = 0usize;
    for step in 0..burn_in + samples {
        let i = rng.below(size as u64) as usize;
        state = table[state * size + i] as usize;
        if step >= burn_in {
            counts[state] += 1;
        }
    }
    counts
}

/// Empirical law of the chain; see [`SampleOptions`].
pub fn sample_stationary(n: usize, options: SampleOptions) -> Result<EmpiricalDistribution> {
    if options.samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let basis = PatternBasis::new(n)?;
    let table = basis.operator_table();
    let chains = options.chains.max(1) as u64;
    let counts = (0..chains)
        .into_par_iter()
        .map(|k| {
            let share = options.samples / chains + u64::from(k < options.samples % chains);
            run_chain(n, &table, options.burn_in, share, chain_seed(options.seed, k))
        })
        .reduce(
            || vec![0u64; basis.len()],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(EmpiricalDistribution { n, counts })
}

/// Three times the worst-case binomial standard error `sqrt(1 / 4N)` per
/// component, summed into the total-variation scale.
pub fn tv_tolerance(dim: usize, samples: u64) -> f64 {
    1.5 * dim as f64 * (0.25 / samples as f64).sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub n: usize,
    pub seed: u64,
    pub burn_in: u64,
    pub samples: u64,
    pub chains: usize,
    pub empirical: BTreeMap<usize, u64>,
    pub tv_distance: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl SampleReport {
    /// Compares the sample against `law` when given; without a law the
    /// report passes vacuously.
    pub fn new(sample: &EmpiricalDistribution, options: SampleOptions, law: Option<&PatternDistribution>) -> Self {
        let tolerance = tv_tolerance(sample.counts.len(), sample.samples());
        let tv_distance = law.map(|l| sample.tv_distance(l));
        Self {
            n: sample.n,
            seed: options.seed,
            burn_in: options.burn_in,
            samples: sample.samples(),
            chains: options.chains.max(1),
            empirical: sample.counts.iter().copied().enumerate().collect(),
            tv_distance,
            tolerance,
            pass: tv_distance.is_none_or(|d| d < tolerance),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpl::{histogram, EnumerationLimits};

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn splitmix_reference_output() {
        let mut rng = ChainRng::new(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(rng.next_u64(), 0x6e789e6aa1b965f4);
    }

    #[test]
    fn below_is_in_range() {
        let mut rng = ChainRng::new(7);
        let mut seen = [0u32; 6];
        for _ in 0..6000 {
            seen[rng.below(6) as usize] += 1;
        }
        assert!(seen.iter().all(|&c| c > 800));
    }

    #[test]
    fn player_probabilities_small() {
        let h1 = histogram(1, 1, EnumerationLimits::default()).unwrap();
        let p1 = LinkPattern::all_adjacent(1).unwrap();
        assert_eq!(player_a_probability(&h1, &p1), ratio(1, 1));
        assert_eq!(player_b_probability(&h1, &p1), ratio(1, 1));
        let h2 = histogram(2, 1, EnumerationLimits::default()).unwrap();
        for p in PatternBasis::new(2).unwrap().patterns() {
            assert_eq!(player_b_probability(&h2, p), ratio(1, 2));
        }
    }

    #[test]
    fn chain_step_n2_split() {
        let start: LinkPattern = "2 1 4 3".parse().unwrap();
        let mut rng = ChainRng::new(3);
        let same = (0..4000).filter(|_| chain_step(&start, &mut rng) == start).count();
        assert!((1800..2200).contains(&same), "{same}");
    }

    #[test]
    fn sampler_determinism_and_n1() {
        let options = SampleOptions { burn_in: 10, samples: 5000, seed: 99, chains: 3 };
        let a = sample_stationary(4, options).unwrap();
        assert_eq!(a, sample_stationary(4, options).unwrap());
        assert_eq!(a.samples(), 5000);
        let one = sample_stationary(1, options).unwrap();
        assert_eq!(one.frequencies(), vec![1.0]);
        assert!(matches!(
            sample_stationary(3, SampleOptions { samples: 0, ..options }),
            Err(Error::ZeroSamples)
        ));
    }

    #[test]
    fn connectivity_and_self_loops() {
        for n in 1..=6 {
            assert!(is_strongly_connected(n).unwrap());
            assert_eq!(missing_self_loop(n).unwrap(), None);
        }
    }
}
