//! Fully packed loop states on the `n x n` grid graph.
//!
//! Internal vertices sit at `(row, col)` with `row, col` in `0..n`, row 0 at
//! the top. Vertical edge `(r, c)` for `r` in `0..=n` joins `(r - 1, c)` and
//! `(r, c)`; rows `0` and `n` are the top and bottom boundary stubs.
//! Horizontal edge `(r, c)` for `c` in `0..=n` joins `(r, c - 1)` and
//! `(r, c)`; columns `0` and `n` are the left and right stubs.
//!
//! The `4n` stubs are walked clockwise starting with the leftmost top stub;
//! every other one (positions 0, 2, 4, ...) is numbered `1..=2n` and must be
//! occupied, the rest must be empty.
//!
//! The bijection with alternating-sign matrices goes through the six-vertex
//! model with domain-wall boundary: a vertical edge carries the partial
//! column sum above it (0 = arrow up, 1 = arrow down) and a horizontal edge
//! the partial row sum to its left (0 = arrow right, 1 = arrow left). A
//! vertex with `row + col` even keeps its outgoing edges, an odd vertex its
//! incoming ones. This is the parity choice under which the occupied stubs
//! are exactly the numbered ones.

use std::fmt;

use crate::error::{Error, Result};
use crate::fpl::asm::AsmMatrix;
use crate::patterns::{self, LinkPattern};

/// Largest grid whose edge sets fit the two 128-bit words of [`FplState`].
pub const MAX_GRID: usize = 10;

/// One boundary stub of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stub {
    Top(usize),
    Right(usize),
    Bottom(usize),
    Left(usize),
}

impl Stub {
    /// 0-based position in the clockwise walk around the boundary.
    pub fn position(self, n: usize) -> usize {
        match self {
            Stub::Top(c) => c,
            Stub::Right(r) => n + r,
            Stub::Bottom(c) => 2 * n + (n - 1 - c),
            Stub::Left(r) => 3 * n + (n - 1 - r),
        }
    }

    pub fn from_position(n: usize, p: usize) -> Self {
        match p / n {
            0 => Stub::Top(p),
            1 => Stub::Right(p - n),
            2 => Stub::Bottom(n - 1 - (p - 2 * n)),
            _ => Stub::Left(n - 1 - (p - 3 * n)),
        }
    }

    /// 1-based boundary label, or `None` for unnumbered stubs.
    pub fn label(self, n: usize) -> Option<usize> {
        let p = self.position(n);
        p.is_multiple_of(2).then_some(p / 2 + 1)
    }

    /// The stub carrying the 1-based label.
    pub fn for_label(n: usize, label: usize) -> Self {
        Self::from_position(n, 2 * (label - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    Up,
    Right,
    Down,
    Left,
}

const DIRS: [Dir; 4] = [Dir::Up, Dir::Right, Dir::Down, Dir::Left];

impl Dir {
    fn opposite(self) -> Self {
        match self {
            Dir::Up => Dir::Down,
            Dir::Right => Dir::Left,
            Dir::Down => Dir::Up,
            Dir::Left => Dir::Right,
        }
    }
}

/// A set of selected edges of the grid graph satisfying the FPL constraints.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FplState {
    n: u8,
    horizontal: u128,
    vertical: u128,
}

pub(crate) fn full_mask(n: usize) -> u32 {
    (1u32 << n) - 1
}

/// Selected vertical edges of row `r` given the column partial sums above it.
pub(crate) fn vertical_row(n: usize, r: usize, mask: u32) -> u32 {
    // Kept iff the partial sum equals the parity of r + c.
    let odd_columns = odd_parity_mask(n, r);
    !(mask ^ odd_columns) & full_mask(n)
}

/// Selected horizontal edges (`n + 1` of them) of row `r`, given the column
/// partial sums above (`before`) and below (`after`) the row.
pub(crate) fn horizontal_row(n: usize, r: usize, before: u32, after: u32) -> u32 {
    let mut bits = 0u32;
    let mut value = 0i32;
    for c in 0..=n {
        if value != ((r + c) & 1) as i32 {
            bits |= 1 << c;
        }
        if c < n {
            value += ((after >> c) & 1) as i32 - ((before >> c) & 1) as i32;
        }
    }
    bits
}

fn odd_parity_mask(n: usize, r: usize) -> u32 {
    let alternate = 0xAAAA_AAAAu32; // odd columns
    let m = if r.is_multiple_of(2) { alternate } else { !alternate };
    m & full_mask(n)
}

impl FplState {
    pub(crate) fn from_parts(n: usize, horizontal: u128, vertical: u128) -> Self {
        Self { n: n as u8, horizontal, vertical }
    }

    /// Builds a state from explicit edge sets and validates it.
    ///
    /// `horizontal[r][c]` for `r < n, c <= n`; `vertical[r][c]` for
    /// `r <= n, c < n`.
    pub fn from_edges(n: usize, horizontal: &[Vec<bool>], vertical: &[Vec<bool>]) -> Result<Self> {
        check_grid(n)?;
        if horizontal.len() != n || horizontal.iter().any(|row| row.len() != n + 1) {
            return Err(Error::InvalidState(format!("horizontal edges must be {n} rows of {}", n + 1)));
        }
        if vertical.len() != n + 1 || vertical.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidState(format!("vertical edges must be {} rows of {n}", n + 1)));
        }
        let mut state = Self::from_parts(n, 0, 0);
        for (r, row) in horizontal.iter().enumerate() {
            for (c, &on) in row.iter().enumerate() {
                if on {
                    state.horizontal |= 1 << (r * (n + 1) + c);
                }
            }
        }
        for (r, row) in vertical.iter().enumerate() {
            for (c, &on) in row.iter().enumerate() {
                if on {
                    state.vertical |= 1 << (r * n + c);
                }
            }
        }
        state.validate()?;
        Ok(state)
    }

    /// The state attached to the column partial-sum masks of an ASM.
    pub(crate) fn from_masks(n: usize, masks: &[u32]) -> Self {
        let mut horizontal = 0u128;
        let mut vertical = 0u128;
        for r in 0..n {
            vertical |= u128::from(vertical_row(n, r, masks[r])) << (r * n);
            horizontal |= u128::from(horizontal_row(n, r, masks[r], masks[r + 1])) << (r * (n + 1));
        }
        vertical |= u128::from(vertical_row(n, n, masks[n])) << (n * n);
        Self::from_parts(n, horizontal, vertical)
    }

    pub fn from_asm(asm: &AsmMatrix) -> Result<Self> {
        check_grid(asm.n())?;
        Ok(Self::from_masks(asm.n(), &asm.masks()))
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Horizontal edge left of vertex `(r, c)`; `c == n` is the right stub.
    pub fn horizontal(&self, r: usize, c: usize) -> bool {
        let n = self.n();
        assert!(r < n && c <= n, "horizontal edge ({r}, {c}) outside the grid");
        (self.horizontal >> (r * (n + 1) + c)) & 1 == 1
    }

    /// Vertical edge above vertex `(r, c)`; `r == n` is the bottom stub.
    pub fn vertical(&self, r: usize, c: usize) -> bool {
        let n = self.n();
        assert!(r <= n && c < n, "vertical edge ({r}, {c}) outside the grid");
        (self.vertical >> (r * n + c)) & 1 == 1
    }

    pub fn stub(&self, stub: Stub) -> bool {
        let n = self.n();
        match stub {
            Stub::Top(c) => self.vertical(0, c),
            Stub::Bottom(c) => self.vertical(n, c),
            Stub::Left(r) => self.horizontal(r, 0),
            Stub::Right(r) => self.horizontal(r, n),
        }
    }

    /// Number of selected edges, stubs included.
    pub fn edge_count(&self) -> u32 {
        self.horizontal.count_ones() + self.vertical.count_ones()
    }

    fn edge(&self, r: usize, c: usize, dir: Dir) -> bool {
        match dir {
            Dir::Up => self.vertical(r, c),
            Dir::Down => self.vertical(r + 1, c),
            Dir::Left => self.horizontal(r, c),
            Dir::Right => self.horizontal(r, c + 1),
        }
    }

    fn degree(&self, r: usize, c: usize) -> usize {
        DIRS.iter().filter(|&&d| self.edge(r, c, d)).count()
    }

    /// Checks the degree and boundary constraints.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        check_grid(n)?;
        let h_bits = n * (n + 1);
        if self.horizontal >> h_bits != 0 || self.vertical >> h_bits != 0 {
            return Err(Error::InvalidState("edge bits outside the grid".into()));
        }
        for r in 0..n {
            for c in 0..n {
                let d = self.degree(r, c);
                if d != 2 {
                    return Err(Error::InvalidState(format!(
                        "vertex ({}, {}) lies on {d} selected edges",
                        r + 1,
                        c + 1
                    )));
                }
            }
        }
        for p in 0..4 * n {
            let stub = Stub::from_position(n, p);
            let numbered = stub.label(n).is_some();
            if self.stub(stub) != numbered {
                return Err(Error::InvalidState(format!(
                    "{} stub {stub:?} is {}",
                    if numbered { "numbered" } else { "unnumbered" },
                    if numbered { "empty" } else { "occupied" }
                )));
            }
        }
        Ok(())
    }

    /// The alternating-sign matrix of the state.
    pub fn to_asm(&self) -> Result<AsmMatrix> {
        self.validate()?;
        let n = self.n();
        let masks: Vec<u32> = (0..=n)
            .map(|r| {
                let selected = ((self.vertical >> (r * n)) as u32) & full_mask(n);
                // Invert `vertical_row`: kept iff value == parity.
                !(selected ^ odd_parity_mask(n, r)) & full_mask(n)
            })
            .collect();
        if masks[0] != 0 || masks[n] != full_mask(n) {
            return Err(Error::InvalidState("vertical boundary does not match domain walls".into()));
        }
        let entries = AsmMatrix::from_masks(n, &masks).entries().to_vec();
        let asm = AsmMatrix::new(n, entries)
            .map_err(|e| Error::InvalidState(format!("does not correspond to an ASM: {e}")))?;
        if Self::from_masks(n, &masks) != *self {
            return Err(Error::InvalidState(
                "horizontal edges are inconsistent with the vertical ones".into(),
            ));
        }
        Ok(asm)
    }

    /// Follows the path from every numbered stub and returns the induced
    /// pairing of boundary labels.
    pub fn link_pattern(&self) -> Result<LinkPattern> {
        let mut partners = [0u8; 2 * MAX_GRID];
        let size = 2 * self.n();
        self.trace_into(&mut partners[..size])?;
        LinkPattern::from_zero_based(partners[..size].to_vec())
            .map_err(|e| Error::Trace(format!("traced pairing is not a link pattern: {e}")))
    }

    /// Rank of the traced link pattern, without allocating.
    pub(crate) fn link_pattern_rank(&self, scratch: &mut [u8]) -> Result<u64> {
        self.trace_into(scratch)?;
        patterns::validate_partners(scratch)
            .map_err(|e| Error::Trace(format!("traced pairing is not a link pattern: {e}")))?;
        Ok(patterns::rank_of(scratch))
    }

    fn trace_into(&self, partners: &mut [u8]) -> Result<()> {
        const UNSEEN: u8 = u8::MAX;
        let n = self.n();
        debug_assert_eq!(partners.len(), 2 * n);
        partners.fill(UNSEEN);
        for start in 0..2 * n {
            if partners[start] != UNSEEN {
                continue;
            }
            let (mut r, mut c, mut from) = match Stub::for_label(n, start + 1) {
                Stub::Top(c) => (0, c, Dir::Up),
                Stub::Right(r) => (r, n - 1, Dir::Right),
                Stub::Bottom(c) => (n - 1, c, Dir::Down),
                Stub::Left(r) => (r, 0, Dir::Left),
            };
            if !self.edge(r, c, from) {
                return Err(Error::Trace(format!("numbered stub {} is empty", start + 1)));
            }
            let mut steps = 0;
            let end = loop {
                steps += 1;
                if steps > n * n {
                    return Err(Error::Trace(format!("path from {} revisits a vertex", start + 1)));
                }
                let mut exits = DIRS.iter().copied().filter(|&d| d != from && self.edge(r, c, d));
                let dir = exits.next().ok_or_else(|| {
                    Error::Trace(format!("dead end at vertex ({}, {})", r + 1, c + 1))
                })?;
                if exits.next().is_some() {
                    return Err(Error::Trace(format!("branch at vertex ({}, {})", r + 1, c + 1)));
                }
                let stub = match dir {
                    Dir::Up if r == 0 => Some(Stub::Top(c)),
                    Dir::Down if r == n - 1 => Some(Stub::Bottom(c)),
                    Dir::Left if c == 0 => Some(Stub::Left(r)),
                    Dir::Right if c == n - 1 => Some(Stub::Right(r)),
                    _ => None,
                };
                if let Some(stub) = stub {
                    break stub
                        .label(n)
                        .ok_or_else(|| Error::Trace(format!("path ends on unnumbered stub {stub:?}")))?;
                }
                match dir {
                    Dir::Up => r -= 1,
                    Dir::Down => r += 1,
                    Dir::Left => c -= 1,
                    Dir::Right => c += 1,
                }
                from = dir.opposite();
            };
            let other = end - 1;
            if other == start || partners[other] != UNSEEN {
                return Err(Error::Trace(format!("label {end} reached twice")));
            }
            partners[start] = other as u8;
            partners[other] = start as u8;
        }
        Ok(())
    }
}

pub(crate) fn check_grid(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GRID {
        return Err(Error::Capacity { what: "grid size", n, max: MAX_GRID });
    }
    Ok(())
}

impl AsmMatrix {
    /// The FPL state corresponding to this matrix.
    pub fn to_state(&self) -> Result<FplState> {
        FplState::from_asm(self)
    }
}

impl fmt::Debug for FplState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FplState")
            .field("n", &self.n)
            .field("horizontal", &format_args!("{:#x}", self.horizontal))
            .field("vertical", &format_args!("{:#x}", self.vertical))
            .finish()
    }
}
