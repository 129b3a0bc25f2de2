//! The loop-model Hamiltonian `H = h_1 + ... + h_2n` on the pattern basis.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patterns::{catalan, join_neighbours, rank_of, PatternBasis};

/// Default ceiling on the basis dimension, `C(9) = 4862`.
pub const DEFAULT_MAX_DIM: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HamiltonianLimits {
    pub max_dim: usize,
}

impl Default for HamiltonianLimits {
    fn default() -> Self {
        Self { max_dim: DEFAULT_MAX_DIM }
    }
}

/// Nonnegative integer matrix stored by columns; each column holds sorted
/// `(row, value)` pairs with nonzero values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    n: usize,
    columns: Vec<Vec<(u32, u32)>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixHeader {
    format_version: u32,
    n: usize,
    dim: usize,
    column_sum: u64,
}

/// Entry `(p, q)` counts the operators `h_i` sending pattern `q` to `p`.
pub fn build_hamiltonian(n: usize, limits: HamiltonianLimits) -> Result<SparseIntMatrix> {
    let dim = catalan(n)?;
    if dim > limits.max_dim as u64 {
        return Err(Error::Dimension { dim: dim as usize, max: limits.max_dim });
    }
    let basis = PatternBasis::new(n)?;
    let columns = basis
        .patterns()
        .par_iter()
        .map(|pattern| {
            let mut column: BTreeMap<u32, u32> = BTreeMap::new();
            let mut scratch = Vec::with_capacity(2 * n);
            for i in 0..2 * n {
                scratch.clear();
                scratch.extend_from_slice(pattern.zero_based());
                join_neighbours(&mut scratch, i);
                *column.entry(rank_of(&scratch) as u32).or_default() += 1;
            }
            column.into_iter().collect()
        })
        .collect();
    Ok(SparseIntMatrix { n, columns })
}

impl SparseIntMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, col: usize) -> &[(u32, u32)] {
        &self.columns[col]
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        let column = &self.columns[col];
        column
            .binary_search_by_key(&(row as u32), |&(r, _)| r)
            .map(|i| u64::from(column[i].1))
            .unwrap_or(0)
    }

    pub fn nonzeros(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        self.columns
            .iter()
            .map(|col| col.iter().map(|&(_, v)| u64::from(v)).sum())
            .collect()
    }

    pub fn diagonal(&self) -> Vec<u64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    /// `(row, col, value)` for every nonzero entry, sorted by row then column.
    pub fn triples(&self) -> Vec<(usize, usize, u64)> {
        let mut out: Vec<(usize, usize, u64)> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r as usize, c, u64::from(v))))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut dense = vec![vec![0; self.dim()]; self.dim()];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                dense[r as usize][c] = u64::from(v);
            }
        }
        dense
    }

    pub fn mul_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                y[r as usize] += f64::from(v) * x[c];
            }
        }
        y
    }

    pub fn mul_bigint(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = vec![BigInt::default(); self.dim()];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                y[r as usize] += &x[c] * v;
            }
        }
        y
    }

    /// Whether `H P = P H` for the permutation matrix sending basis vector
    /// `j` to `perm[j]`, i.e. `H[perm i][perm j] = H[i][j]` everywhere.
    pub fn commutes_with(&self, perm: &[usize]) -> bool {
        perm.len() == self.dim()
            && self.columns.iter().enumerate().all(|(c, col)| {
                let image = &self.columns[perm[c]];
                image.len() == col.len()
                    && col.iter().all(|&(r, v)| self.get(perm[r as usize], perm[c]) == u64::from(v))
            })
    }

    /// Coordinate text: a JSON header line, then `row col value` lines
    /// sorted by row and column (0-based ranks).
    pub fn to_coordinate_text(&self) -> String {
        let sums = self.column_sums();
        let uniform = sums.first().copied().filter(|s| sums.iter().all(|x| x == s)).unwrap_or(0);
        let header = MatrixHeader {
            format_version: crate::fpl::FORMAT_VERSION,
            n: self.n,
            dim: self.dim(),
            column_sum: uniform,
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for (r, c, v) in self.triples() {
            out.push_str(&format!("{r} {c} {v}\n"));
        }
        out
    }

    pub fn from_coordinate_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: MatrixHeader = serde_json::from_str(lines.next().unwrap_or_default())
            .map_err(|e| Error::Parse(format!("bad matrix header: {e}")))?;
        if header.format_version != crate::fpl::FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format version {}", header.format_version)));
        }
        let mut columns: Vec<Vec<(u32, u32)>> = vec![Vec::new(); header.dim];
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|e| Error::Parse(format!("bad entry {t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let [r, c, v] = nums[..] else {
                return Err(Error::Parse(format!("bad triple {line:?}")));
            };
            let (r, c) = (r as usize, c as usize);
            if r >= header.dim || c >= header.dim || v == 0 || v > u64::from(u32::MAX) {
                return Err(Error::Parse(format!("triple {line:?} out of range")));
            }
            columns[c].push((r as u32, v as u32));
        }
        for col in &mut columns {
            col.sort_unstable();
        }
        let m = Self { n: header.n, columns };
        if header.column_sum != 0 && m.column_sums().iter().any(|&s| s != header.column_sum) {
            return Err(Error::Parse("column sums disagree with the header".into()));
        }
        Ok(m)
    }
}
