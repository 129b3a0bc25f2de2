//! Noncrossing link patterns on `2n` circle points.
//!
//! Points are numbered `1..=2n` clockwise. A [`LinkPattern`] stores the
//! partner of every point; all other views (arc list, parenthesis word) are
//! derived from it. Patterns are totally ordered lexicographically by their
//! partner sequence, and a pattern's position in that order is its rank.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest `n` whose Catalan number still fits a `u64` rank.
pub const MAX_ARCS: usize = 36;

/// `C(n)` for `n <= MAX_ARCS`, computed once with checked arithmetic.
fn catalan_table() -> &'static [u64; MAX_ARCS + 1] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[u64; MAX_ARCS + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0u64; MAX_ARCS + 1];
        table[0] = 1;
        for k in 0..MAX_ARCS {
            // C(k+1) = C(k) * 2(2k+1) / (k+2)
            let next = u128::from(table[k]) * (2 * (2 * k as u128 + 1)) / (k as u128 + 2);
            table[k + 1] = u64::try_from(next).expect("MAX_ARCS chosen so that C(n) fits in u64");
        }
        table
    })
}

/// The Catalan number `C(n)`, the number of link patterns with `n` arcs.
pub fn catalan(n: usize) -> Result<u64> {
    catalan_table()
        .get(n)
        .copied()
        .ok_or(Error::UnsupportedPatternSize { n, max: MAX_ARCS })
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ARCS {
        return Err(Error::UnsupportedPatternSize { n, max: MAX_ARCS });
    }
    Ok(())
}

/// A noncrossing perfect matching of the points `1..=2n` on a circle.
///
/// The derived ordering is the canonical one: lexicographic on the partner
/// sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkPattern {
    // 0-based partners; positions fit in a byte since 2 * MAX_ARCS < 256.
    partners: Vec<u8>,
}

impl LinkPattern {
    /// Builds a pattern from 1-based partners, `partners[i - 1]` being the
    /// point linked to point `i`.
    pub fn from_partners(partners: &[usize]) -> Result<Self> {
        let len = partners.len();
        if len == 0 || !len.is_multiple_of(2) {
            return Err(Error::InvalidPattern(format!(
                "need a positive even number of points, got {len}"
            )));
        }
        check_size(len / 2)?;
        let mut zero_based = Vec::with_capacity(len);
        for (i, &p) in partners.iter().enumerate() {
            if p == 0 || p > len {
                return Err(Error::InvalidPattern(format!(
                    "point {} is linked to {p}, outside 1..={len}",
                    i + 1
                )));
            }
            zero_based.push((p - 1) as u8);
        }
        Self::from_zero_based(zero_based)
    }

    pub(crate) fn from_zero_based(partners: Vec<u8>) -> Result<Self> {
        validate_partners(&partners)?;
        Ok(Self { partners })
    }

    pub(crate) fn from_zero_based_unchecked(partners: Vec<u8>) -> Self {
        debug_assert!(validate_partners(&partners).is_ok());
        Self { partners }
    }

    /// Builds a pattern from 1-based arcs in any order.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        check_size(n)?;
        let size = 2 * n;
        if arcs.len() != n {
            return Err(Error::InvalidPattern(format!(
                "expected {n} arcs, got {}",
                arcs.len()
            )));
        }
        let mut partners = vec![0usize; size];
        for &(a, b) in arcs {
            for p in [a, b] {
                if p == 0 || p > size {
                    return Err(Error::InvalidPattern(format!("point {p} outside 1..={size}")));
                }
                if partners[p - 1] != 0 {
                    return Err(Error::InvalidPattern(format!("point {p} used twice")));
                }
            }
            partners[a - 1] = b;
            partners[b - 1] = a;
        }
        Self::from_partners(&partners)
    }

    /// The pattern with arcs `(1,2), (3,4), ..., (2n-1, 2n)`; rank 0.
    pub fn all_adjacent(n: usize) -> Result<Self> {
        check_size(n)?;
        let partners = (0..2 * n as u8).map(|p| p ^ 1).collect();
        Ok(Self { partners })
    }

    /// Number of arcs.
    pub fn n(&self) -> usize {
        self.partners.len() / 2
    }

    /// Number of points, `2n`.
    pub fn points(&self) -> usize {
        self.partners.len()
    }

    /// Partner of the 1-based point `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partners[i - 1] as usize + 1
    }

    pub(crate) fn zero_based(&self) -> &[u8] {
        &self.partners
    }

    /// 1-based partners of points `1..=2n`.
    pub fn partners(&self) -> Vec<usize> {
        self.partners.iter().map(|&p| p as usize + 1).collect()
    }

    /// Arcs `(a, b)` with `a < b`, sorted by `a`.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.partners
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i < p as usize)
            .map(|(i, &p)| (i + 1, p as usize + 1))
            .collect()
    }

    /// Count of points `i` linked to their cyclic successor. This is how many
    /// of the `2n` operators `h_i` leave the pattern unchanged.
    pub fn adjacent_arcs(&self) -> usize {
        let size = self.partners.len();
        (0..size)
            .filter(|&i| self.partners[i] as usize == (i + 1) % size)
            .count()
    }

    /// Rank in the canonical order, in `0..catalan(n)`.
    pub fn rank(&self) -> u64 {
        rank_of(&self.partners)
    }

    /// Inverse of [`LinkPattern::rank`].
    pub fn unrank(n: usize, rank: u64) -> Result<Self> {
        let count = catalan(n)?;
        check_size(n)?;
        if rank >= count {
            return Err(Error::RankOutOfRange { n, rank, count });
        }
        let mut partners = vec![0u8; 2 * n];
        unrank_into(&mut partners, 0, n, rank);
        Ok(Self { partners })
    }

    /// Applies `h_i` for the 1-based operator index `i` in `1..=2n`.
    pub fn apply_h(&self, i: usize) -> Result<Self> {
        let max = self.points();
        if i == 0 || i > max {
            return Err(Error::OperatorIndex { index: i, max });
        }
        Ok(self.apply_h0(i - 1))
    }

    /// `h` for the 0-based point `i`, pairing `i` with `(i + 1) mod 2n`.
    pub(crate) fn apply_h0(&self, i: usize) -> Self {
        let mut partners = self.partners.clone();
        join_neighbours(&mut partners, i);
        Self { partners }
    }

    /// Relabels every point `i` as `i + 1` (and `2n` as `1`).
    pub fn rotate(&self) -> Self {
        let size = self.partners.len();
        let mut partners = vec![0u8; size];
        for (i, &p) in self.partners.iter().enumerate() {
            partners[(i + 1) % size] = ((p as usize + 1) % size) as u8;
        }
        Self { partners }
    }

    /// Relabels every point `i` as `2n + 1 - i`.
    pub fn reflect(&self) -> Self {
        let last = self.partners.len() - 1;
        let mut partners = vec![0u8; last + 1];
        for (i, &p) in self.partners.iter().enumerate() {
            partners[last - i] = (last - p as usize) as u8;
        }
        Self { partners }
    }

    /// All distinct images of the pattern under rotations and reflections.
    pub fn dihedral_orbit(&self) -> Vec<Self> {
        let mut orbit = Vec::with_capacity(2 * self.points());
        let mut current = self.clone();
        for _ in 0..self.points() {
            orbit.push(current.clone());
            orbit.push(current.reflect());
            current = current.rotate();
        }
        orbit.sort();
        orbit.dedup();
        orbit
    }

    /// Parenthesis word: `(` at a point opening an arc, `)` at one closing it.
    pub fn to_parens(&self) -> String {
        self.partners
            .iter()
            .enumerate()
            .map(|(i, &p)| if (p as usize) > i { '(' } else { ')' })
            .collect()
    }

    pub fn from_parens(word: &str) -> Result<Self> {
        let mut partners = vec![0u8; word.len()];
        let mut open = Vec::new();
        for (i, ch) in word.chars().enumerate() {
            match ch {
                '(' => open.push(i),
                ')' => {
                    let j = open
                        .pop()
                        .ok_or_else(|| Error::Parse(format!("unbalanced ')' at {}", i + 1)))?;
                    partners[i] = j as u8;
                    partners[j] = i as u8;
                }
                other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
            }
        }
        if !open.is_empty() || word.is_empty() {
            return Err(Error::Parse(format!("unbalanced parenthesis word {word:?}")));
        }
        check_size(word.len() / 2)?;
        Ok(Self { partners })
    }
}

/// Rewires `partners` in place so that `i` and its cyclic successor are
/// linked; their old partners get linked to each other.
pub(crate) fn join_neighbours(partners: &mut [u8], i: usize) {
    let next = (i + 1) % partners.len();
    let j = partners[i] as usize;
    if j == next {
        return;
    }
    let k = partners[next] as usize;
    partners[i] = next as u8;
    partners[next] = i as u8;
    partners[j] = k as u8;
    partners[k] = j as u8;
}

pub(crate) fn validate_partners(partners: &[u8]) -> Result<()> {
    let len = partners.len();
    if len == 0 || !len.is_multiple_of(2) {
        return Err(Error::InvalidPattern(format!(
            "need a positive even number of points, got {len}"
        )));
    }
    check_size(len / 2)?;
    for (i, &p) in partners.iter().enumerate() {
        let p = p as usize;
        if p >= len {
            return Err(Error::InvalidPattern(format!("point {} has no valid partner", i + 1)));
        }
        if p == i {
            return Err(Error::InvalidPattern(format!("point {} is linked to itself", i + 1)));
        }
        if partners[p] as usize != i {
            return Err(Error::InvalidPattern(format!(
                "point {} is linked to {} but not conversely",
                i + 1,
                p + 1
            )));
        }
    }
    let mut open = Vec::with_capacity(len / 2);
    for (i, &p) in partners.iter().enumerate() {
        let p = p as usize;
        if p > i {
            open.push(i);
        } else if open.pop() != Some(p) {
            return Err(Error::InvalidPattern(format!(
                "arc ({}, {}) crosses another arc",
                p + 1,
                i + 1
            )));
        }
    }
    Ok(())
}

/// Rank of a valid 0-based partner sequence.
pub(crate) fn rank_of(partners: &[u8]) -> u64 {
    rank_range(partners, 0, partners.len())
}

// Rank of the sub-pattern on positions `lo..hi`, which must be closed under
// the matching. The first point's partner splits the range into an inner
// and an outer block; patterns are ordered by that partner first, then by
// the inner block, then by the outer one.
fn rank_range(partners: &[u8], mut lo: usize, hi: usize) -> u64 {
    let table = catalan_table();
    let mut rank = 0u64;
    while lo < hi {
        let arcs = (hi - lo) / 2;
        let j = partners[lo] as usize;
        let inner = (j - lo - 1) / 2;
        let outer = arcs - 1 - inner;
        let skipped: u64 = (0..inner).map(|a| table[a] * table[arcs - 1 - a]).sum();
        let inner_rank = rank_range(partners, lo + 1, j);
        rank += skipped + inner_rank * table[outer];
        // The outer block's own rank is added with unit weight.
        lo = j + 1;
    }
    rank
}

fn unrank_into(partners: &mut [u8], lo: usize, arcs: usize, mut rank: u64) {
    let table = catalan_table();
    if arcs == 0 {
        return;
    }
    let mut inner = 0;
    loop {
        let block = table[inner] * table[arcs - 1 - inner];
        if rank < block {
            break;
        }
        rank -= block;
        inner += 1;
    }
    let outer = arcs - 1 - inner;
    let j = lo + 2 * inner + 1;
    partners[lo] = j as u8;
    partners[j] = lo as u8;
    unrank_into(partners, lo + 1, inner, rank / table[outer]);
    unrank_into(partners, j + 1, outer, rank % table[outer]);
}

/// All `catalan(n)` patterns in canonical order; index = rank.
pub fn enumerate_patterns(n: usize) -> Result<Vec<LinkPattern>> {
    check_size(n)?;
    let count = catalan(n)?;
    let len = usize::try_from(count).map_err(|_| Error::UnsupportedPatternSize { n, max: MAX_ARCS })?;
    let mut out = Vec::new();
    out.try_reserve_exact(len)
        .map_err(|_| Error::Capacity { what: "pattern enumeration", n, max: n - 1 })?;
    // blocks[k] lists the k-arc patterns on positions 0..2k in canonical order.
    let mut blocks: Vec<Vec<Vec<u8>>> = vec![vec![Vec::new()]];
    for arcs in 1..=n {
        let mut level = Vec::with_capacity(catalan(arcs)? as usize);
        for inner in 0..arcs {
            let outer = arcs - 1 - inner;
            let j = 2 * inner + 1;
            for inside in &blocks[inner] {
                for outside in &blocks[outer] {
                    let mut partners = Vec::with_capacity(2 * arcs);
                    partners.push(j as u8);
                    partners.extend(inside.iter().map(|&p| p + 1));
                    partners.push(0);
                    partners.extend(outside.iter().map(|&p| p + j as u8 + 1));
                    level.push(partners);
                }
            }
        }
        blocks.push(level);
    }
    out.extend(
        blocks
            .pop()
            .expect("n >= 1")
            .into_iter()
            .map(LinkPattern::from_zero_based_unchecked),
    );
    debug_assert_eq!(out.len(), len);
    Ok(out)
}

impl fmt::Display for LinkPattern {
    /// Space-separated 1-based partners, e.g. `2 1 4 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &p) in self.partners.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", p as usize + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinkPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinkPattern[{self}]")
    }
}

impl FromStr for LinkPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let partners = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad partner {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_partners(&partners)
    }
}

/// The canonical basis of link patterns for a fixed `n`.
#[derive(Debug, Clone)]
pub struct PatternBasis {
    n: usize,
    patterns: Vec<LinkPattern>,
}

impl PatternBasis {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self { n, patterns: enumerate_patterns(n)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[LinkPattern] {
        &self.patterns
    }

    pub fn get(&self, index: usize) -> &LinkPattern {
        &self.patterns[index]
    }

    /// Basis index of `pattern`, which must have the basis' `n`.
    pub fn index_of(&self, pattern: &LinkPattern) -> usize {
        debug_assert_eq!(pattern.n(), self.n);
        pattern.rank() as usize
    }

    /// Row-major table `next[index * 2n + i] = index of h_i(pattern)` for
    /// 0-based operator `i`.
    pub fn operator_table(&self) -> Vec<u32> {
        let size = 2 * self.n;
        let mut table = Vec::with_capacity(self.len() * size);
        let mut scratch = Vec::with_capacity(size);
        for pattern in &self.patterns {
            for i in 0..size {
                scratch.clear();
                scratch.extend_from_slice(pattern.zero_based());
                join_neighbours(&mut scratch, i);
                table.push(rank_of(&scratch) as u32);
            }
        }
        table
    }

    /// Permutation `perm[index] = index of rotate(pattern)`.
    pub fn rotation_permutation(&self) -> Vec<usize> {
        self.patterns.iter().map(|p| self.index_of(&p.rotate())).collect()
    }

    /// Permutation `perm[index] = index of reflect(pattern)`.
    pub fn reflection_permutation(&self) -> Vec<usize> {
        self.patterns.iter().map(|p| self.index_of(&p.reflect())).collect()
    }
}
