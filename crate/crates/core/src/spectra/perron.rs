//! Exact Perron eigenvector of the Hamiltonian.
//!
//! The kernel of `H - 2n I` is computed modulo several word-sized primes.
//! A nullity of 1 modulo any prime bounds the rational nullity by 1, and the
//! all-ones row vector is a left null vector (every column of `H` sums to
//! `2n`), so the rational kernel is then exactly one-dimensional. Residues
//! are combined by CRT and lifted to rationals by reconstruction; the
//! resulting integer vector is accepted only after `H w = 2n w` has been
//! checked in exact integer arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::bareiss::integer_kernel;
use super::hamiltonian::SparseIntMatrix;
use super::modular::{self, PRIMES};
use super::vector::BigIntVector;

/// Largest dimension for which the fraction-free route is used as a
/// fallback when no prime certifies a simple eigenvalue.
pub const FRACTION_FREE_MAX_DIM: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    /// Multi-modular elimination; `primes` residues were combined.
    Modular { primes: usize },
    FractionFree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerronVector {
    /// Positive, coprime components indexed by pattern rank.
    pub vector: BigIntVector,
    pub method: KernelMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerronFailure {
    #[error("eigenvalue {eigenvalue} has a {nullity}-dimensional eigenspace")]
    Degenerate { eigenvalue: u64, nullity: usize },
    #[error("the eigenvector for {eigenvalue} has non-positive components")]
    NotPositive { eigenvalue: u64, vector: BigIntVector },
    #[error("could not certify the eigenvector: {0}")]
    Inconclusive(String),
}

fn eigenvalue(h: &SparseIntMatrix) -> u64 {
    2 * h.n() as u64
}

/// The generator of `ker(H - 2n I)`, scaled to positive coprime integers.
pub fn perron_vector(h: &SparseIntMatrix) -> Result<PerronVector, PerronFailure> {
    let lambda = eigenvalue(h);
    let dim = h.dim();
    let triples = h.triples();
    let mut modulus = BigInt::one();
    let mut residues = vec![BigInt::zero(); dim];
    let mut used = 0;
    let mut min_nullity = usize::MAX;
    for (which, &p) in PRIMES.iter().enumerate() {
        let mut dense = vec![0u64; dim * dim];
        for &(r, c, v) in &triples {
            dense[r * dim + c] = v % p;
        }
        for i in 0..dim {
            let d = &mut dense[i * dim + i];
            *d = (*d + p - lambda % p) % p;
        }
        let k = modular::kernel(which, dense, dim);
        min_nullity = min_nullity.min(k.nullity);
        let Some(x) = k.vector else { continue };
        if x[0] == 0 {
            continue;
        }
        // Normalize to x[0] = 1 so residues from different primes agree.
        let inv = mod_inverse(x[0], p);
        let p_big = BigInt::from(p);
        let m_inv = BigInt::from(mod_inverse((&modulus % &p_big).try_into().expect("< p"), p));
        for (res, &xi) in residues.iter_mut().zip(&x) {
            let xi = BigInt::from((u128::from(xi) * u128::from(inv) % u128::from(p)) as u64);
            let delta = ((xi - &*res) * &m_inv).mod_floor(&p_big);
            *res += &modulus * delta;
        }
        modulus *= p_big;
        used += 1;
        if let Some(w) = reconstruct(&residues, &modulus) {
            if is_eigenvector(h, &w, lambda) {
                return finish(w, lambda, KernelMethod::Modular { primes: used });
            }
        }
    }
    if used == 0 {
        if dim <= FRACTION_FREE_MAX_DIM {
            return perron_vector_fraction_free(h);
        }
        return Err(PerronFailure::Degenerate { eigenvalue: lambda, nullity: min_nullity });
    }
    Err(PerronFailure::Inconclusive(format!(
        "rational reconstruction did not produce an eigenvector after {used} primes"
    )))
}

/// Same contract as [`perron_vector`], computed by fraction-free
/// elimination on the dense integer matrix. Cubic in the dimension with
/// growing integers; meant for small bases and cross-checks.
pub fn perron_vector_fraction_free(h: &SparseIntMatrix) -> Result<PerronVector, PerronFailure> {
    let lambda = eigenvalue(h);
    let dense: Vec<Vec<BigInt>> = h
        .to_dense()
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, v)| BigInt::from(v) - if i == j { BigInt::from(lambda) } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut kernel = integer_kernel(&dense);
    if kernel.len() != 1 {
        return Err(PerronFailure::Degenerate { eigenvalue: lambda, nullity: kernel.len() });
    }
    finish(kernel.pop().expect("one vector"), lambda, KernelMethod::FractionFree)
}

fn finish(w: BigIntVector, lambda: u64, method: KernelMethod) -> Result<PerronVector, PerronFailure> {
    let w = w.primitive();
    if !w.is_positive() {
        return Err(PerronFailure::NotPositive { eigenvalue: lambda, vector: w });
    }
    Ok(PerronVector { vector: w, method })
}

fn is_eigenvector(h: &SparseIntMatrix, w: &BigIntVector, lambda: u64) -> bool {
    let hw = h.mul_bigint(w.components());
    w.components().iter().any(|x| !x.is_zero())
        && hw.iter().zip(w.components()).all(|(a, b)| *a == b * lambda)
}

fn mod_inverse(x: u64, p: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (u128::from(x % p), p - 2, 1u128);
    let p = u128::from(p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc as u64
}

/// Lifts every residue to a fraction with numerator and denominator below
/// `sqrt(m / 2)`, then clears denominators.
fn reconstruct(residues: &[BigInt], modulus: &BigInt) -> Option<BigIntVector> {
    let bound = (modulus / 2u32).sqrt();
    let mut fractions = Vec::with_capacity(residues.len());
    for u in residues {
        fractions.push(rational_reconstruction(u, modulus, &bound)?);
    }
    let lcm = fractions.iter().fold(BigInt::one(), |l, (_, d)| l.lcm(d));
    let ints = fractions.into_iter().map(|(a, b)| a * (&lcm / b)).collect();
    Some(BigIntVector::new(ints).primitive())
}

// Half-extended Euclid on (m, u), stopped once the remainder drops to the
// bound; the cofactor is the denominator.
fn rational_reconstruction(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    let (a, b) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    if !a.gcd(&b).is_one() {
        return None;
    }
    Some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{build_hamiltonian, HamiltonianLimits};

    fn ints(v: &BigIntVector) -> Vec<i64> {
        v.components().iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn reconstruction_recovers_fractions() {
        let m = BigInt::from(PRIMES[0]);
        let bound = (&m / 2u32).sqrt();
        // 3/7 mod p
        let inv7 = BigInt::from(mod_inverse(7, PRIMES[0]));
        let u = (BigInt::from(3) * inv7).mod_floor(&m);
        assert_eq!(rational_reconstruction(&u, &m, &bound), Some((BigInt::from(3), BigInt::from(7))));
        let minus = (BigInt::from(-5)).mod_floor(&m);
        assert_eq!(rational_reconstruction(&minus, &m, &bound), Some((BigInt::from(-5), BigInt::one())));
    }

    #[test]
    fn small_n() {
        let h1 = build_hamiltonian(1, HamiltonianLimits::default()).unwrap();
        assert_eq!(ints(&perron_vector(&h1).unwrap().vector), vec![1]);
        let h2 = build_hamiltonian(2, HamiltonianLimits::default()).unwrap();
        assert_eq!(ints(&perron_vector(&h2).unwrap().vector), vec![1, 1]);
        let h3 = build_hamiltonian(3, HamiltonianLimits::default()).unwrap();
        assert_eq!(ints(&perron_vector(&h3).unwrap().vector), vec![2, 1, 1, 2, 1]);
    }

    #[test]
    fn routes_agree() {
        for n in 1..=6 {
            let h = build_hamiltonian(n, HamiltonianLimits::default()).unwrap();
            let modular = perron_vector(&h).unwrap();
            let exact = perron_vector_fraction_free(&h).unwrap();
            assert_eq!(modular.vector, exact.vector, "n = {n}");
            assert!(matches!(modular.method, KernelMethod::Modular { .. }));
            assert_eq!(exact.method, KernelMethod::FractionFree);
        }
    }
}
