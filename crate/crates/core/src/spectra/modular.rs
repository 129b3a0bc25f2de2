//! Kernel computations over `GF(p)` for word-sized primes.

/// Primes just below `2^31`; products of two residues fit in a `u64`
/// together with an added residue.
pub(crate) const PRIMES: [u64; 8] = [
    2_147_483_647,
    2_147_483_629,
    2_147_483_587,
    2_147_483_579,
    2_147_483_563,
    2_147_483_549,
    2_147_483_543,
    2_147_483_497,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ModKernel {
    pub prime: u64,
    pub nullity: usize,
    /// A kernel vector when the nullity is exactly 1.
    pub vector: Option<Vec<u64>>,
}

/// Kernel of the dense `dim x dim` row-major matrix `a` modulo the prime at
/// `PRIMES[which]`. Entries must already be reduced.
pub(crate) fn kernel(which: usize, a: Vec<u64>, dim: usize) -> ModKernel {
    match which {
        0 => kernel_const::<{ PRIMES[0] }>(a, dim),
        1 => kernel_const::<{ PRIMES[1] }>(a, dim),
        2 => kernel_const::<{ PRIMES[2] }>(a, dim),
        3 => kernel_const::<{ PRIMES[3] }>(a, dim),
        4 => kernel_const::<{ PRIMES[4] }>(a, dim),
        5 => kernel_const::<{ PRIMES[5] }>(a, dim),
        6 => kernel_const::<{ PRIMES[6] }>(a, dim),
        7 => kernel_const::<{ PRIMES[7] }>(a, dim),
        _ => panic!("no prime #{which}"),
    }
}

fn pow_mod<const P: u64>(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= P;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % P;
        }
        base = base * base % P;
        exp >>= 1;
    }
    acc
}

fn inverse<const P: u64>(x: u64) -> u64 {
    pow_mod::<P>(x, P - 2)
}

// The prime is a constant so the compiler turns `% P` into multiplications.
fn kernel_const<const P: u64>(mut a: Vec<u64>, dim: usize) -> ModKernel {
    let mut pivots: Vec<usize> = Vec::with_capacity(dim);
    let mut row = 0;
    for col in 0..dim {
        if row == dim {
            break;
        }
        let Some(p) = (row..dim).find(|&r| a[r * dim + col] != 0) else {
            continue;
        };
        if p != row {
            for j in col..dim {
                a.swap(row * dim + j, p * dim + j);
            }
        }
        let inv = inverse::<P>(a[row * dim + col]);
        for x in &mut a[row * dim + col..(row + 1) * dim] {
            *x = *x * inv % P;
        }
        let (upper, lower) = a.split_at_mut((row + 1) * dim);
        let pivot_row = &upper[row * dim + col..];
        for target in lower.chunks_exact_mut(dim) {
            let f = target[col];
            if f == 0 {
                continue;
            }
            let neg = P - f;
            for (x, &y) in target[col..].iter_mut().zip(pivot_row) {
                *x = (*x + neg * y) % P;
            }
        }
        pivots.push(col);
        row += 1;
    }
    let nullity = dim - pivots.len();
    let vector = (nullity == 1).then(|| {
        let free = (0..dim)
            .find(|c| pivots.binary_search(c).is_err())
            .expect("one free column");
        let mut x = vec![0u64; dim];
        x[free] = 1;
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let row = &a[r * dim..(r + 1) * dim];
            let mut acc = 0u64;
            for j in pc + 1..dim {
                acc = (acc + row[j] * x[j]) % P;
            }
            x[pc] = (P - acc) % P;
        }
        x
    });
    ModKernel { prime: P, nullity, vector }
}
