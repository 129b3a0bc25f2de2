//! Fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::vector::BigIntVector;

/// A basis of the rational kernel of `matrix`, one primitive integer vector
/// per non-pivot column. All intermediate entries stay integral.
pub fn integer_kernel(matrix: &[Vec<BigInt>]) -> Vec<BigIntVector> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut pivots = Vec::new();
    let mut previous = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                // Exact by Sylvester's identity.
                let num = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = num / &previous;
            }
            row[c] = BigInt::zero();
        }
        previous = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate().rev() {
                let acc: BigRational = (pc + 1..cols)
                    .filter(|&j| !m[i][j].is_zero() && !x[j].is_zero())
                    .map(|j| BigRational::from_integer(m[i][j].clone()) * &x[j])
                    .sum();
                x[pc] = -acc / BigRational::from_integer(m[i][pc].clone());
            }
            let lcm = x.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
            let ints = x.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
            BigIntVector::new(ints).primitive()
        })
        .collect()
}

/// Rank of an integer matrix via the same elimination.
pub fn integer_rank(matrix: &[Vec<BigInt>]) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    cols - integer_kernel(matrix).len()
}
