//! Depth-first enumeration of FPL states.
//!
//! A state is grown one grid row at a time. After `r` rows the only thing
//! the rest of the grid sees is which columns carry a partial sum of 1
//! (equivalently which vertical arrows below row `r` point down), so the
//! search state is a bitmask. Row transitions `S -> S'` are precomputed
//! together with the edge bits they select.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fpl::state::{check_grid, full_mask, horizontal_row, vertical_row, FplState, MAX_GRID};

/// Default largest grid the enumerator accepts.
pub const DEFAULT_MAX_GRID: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_n: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self { max_n: DEFAULT_MAX_GRID }
    }
}

impl EnumerationLimits {
    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::Capacity { what: "FPL enumeration", n, max: self.max_n });
        }
        check_grid(n)
    }
}

#[derive(Debug, Clone, Copy)]
struct Step {
    next: u32,
    // Horizontal edge bits of the row, indexed by row parity.
    horizontal: [u32; 2],
}

#[derive(Debug)]
struct Tables {
    n: usize,
    steps: Vec<Vec<Step>>,
    // Vertical edge bits above a row, indexed by [row parity][mask].
    vertical: [Vec<u32>; 2],
}

impl Tables {
    fn new(n: usize) -> Self {
        let masks = 1usize << n;
        let mut steps = vec![Vec::new(); masks];
        for (before, out) in steps.iter_mut().enumerate() {
            let before = before as u32;
            for after in 0..masks as u32 {
                if after.count_ones() == before.count_ones() + 1 && alternates(n, before, after) {
                    out.push(Step {
                        next: after,
                        horizontal: [
                            horizontal_row(n, 0, before, after),
                            horizontal_row(n, 1, before, after),
                        ],
                    });
                }
            }
        }
        let vertical = [0, 1].map(|parity| (0..masks as u32).map(|m| vertical_row(n, parity, m)).collect());
        Self { n, steps, vertical }
    }
}

// True when the row S' - S has partial sums in {0, 1} (and so, given the
// popcount condition, nonzero entries alternating from +1 to +1).
fn alternates(n: usize, before: u32, after: u32) -> bool {
    let mut sum = 0i32;
    for c in 0..n {
        sum += ((after >> c) & 1) as i32 - ((before >> c) & 1) as i32;
        if !(0..=1).contains(&sum) {
            return false;
        }
    }
    sum == 1
}

/// A partial state: the column masks after the first `masks.len() - 1` rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prefix {
    masks: Vec<u32>,
}

impl Prefix {
    pub fn depth(&self) -> usize {
        self.masks.len() - 1
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }
}

/// Enumerates the FPL states of one grid size.
#[derive(Debug, Clone)]
pub struct StateEnumerator {
    tables: Arc<Tables>,
}

impl StateEnumerator {
    pub fn new(n: usize, limits: EnumerationLimits) -> Result<Self> {
        limits.check(n)?;
        debug_assert!(n <= MAX_GRID);
        Ok(Self { tables: Arc::new(Tables::new(n)) })
    }

    pub fn n(&self) -> usize {
        self.tables.n
    }

    /// Every state, each exactly once, in a fixed order.
    pub fn states(&self) -> States {
        self.states_from(&Prefix { masks: vec![0] })
    }

    /// The states extending `prefix`, in the same relative order as
    /// [`StateEnumerator::states`].
    pub fn states_from(&self, prefix: &Prefix) -> States {
        let t = &*self.tables;
        let n = t.n;
        let mut stack = Vec::with_capacity(n + 1);
        let mut frame = Frame { mask: prefix.masks[0], next: 0, horizontal: 0, vertical: 0 };
        for (depth, &mask) in prefix.masks.iter().enumerate().skip(1) {
            let before = frame.mask;
            let step = t.steps[before as usize]
                .iter()
                .find(|s| s.next == mask)
                .expect("prefix built by this enumerator");
            frame = child(t, &frame, depth - 1, step);
        }
        stack.push(frame);
        States { tables: Arc::clone(&self.tables), stack, base: prefix.depth() }
    }

    /// All valid prefixes of the given depth, in enumeration order. The
    /// states extending them partition the full state set.
    pub fn prefixes(&self, depth: usize) -> Vec<Prefix> {
        let t = &*self.tables;
        let depth = depth.min(t.n);
        let mut out = vec![Prefix { masks: vec![0] }];
        for _ in 0..depth {
            out = out
                .into_iter()
                .flat_map(|p| {
                    let last = *p.masks.last().expect("non-empty");
                    t.steps[last as usize].iter().map(move |s| {
                        let mut masks = p.masks.clone();
                        masks.push(s.next);
                        Prefix { masks }
                    })
                })
                .collect();
        }
        out
    }

    /// Smallest depth giving at least `target` prefixes (capped at `n`).
    pub fn split_depth(&self, target: usize) -> usize {
        let t = &*self.tables;
        let mut counts = vec![0usize; t.steps.len()];
        counts[0] = 1;
        for depth in 0..t.n {
            if counts.iter().sum::<usize>() >= target {
                return depth;
            }
            let mut next = vec![0usize; counts.len()];
            for (mask, &c) in counts.iter().enumerate() {
                for s in &t.steps[mask] {
                    next[s.next as usize] += c;
                }
            }
            counts = next;
        }
        t.n
    }
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    mask: u32,
    next: usize,
    horizontal: u128,
    vertical: u128,
}

// Places row `row` (between masks `parent.mask` and `step.next`).
fn child(t: &Tables, parent: &Frame, row: usize, step: &Step) -> Frame {
    let n = t.n;
    let parity = row & 1;
    let mut vertical = parent.vertical | u128::from(t.vertical[parity][parent.mask as usize]) << (row * n);
    let horizontal = parent.horizontal | u128::from(step.horizontal[parity]) << (row * (n + 1));
    if row + 1 == n {
        debug_assert_eq!(step.next, full_mask(n));
        vertical |= u128::from(t.vertical[n & 1][step.next as usize]) << (n * n);
    }
    Frame { mask: step.next, next: 0, horizontal, vertical }
}

/// Iterator over FPL states; see [`StateEnumerator`].
#[derive(Debug)]
pub struct States {
    tables: Arc<Tables>,
    stack: Vec<Frame>,
    // Depth of the bottom frame; the prefix above it is never revisited.
    base: usize,
}

impl Iterator for States {
    type Item = FplState;

    fn next(&mut self) -> Option<FplState> {
        let t = &*self.tables;
        let n = t.n;
        loop {
            let depth = self.base + self.stack.len().checked_sub(1)?;
            if depth == n {
                let leaf = self.stack.pop().expect("non-empty");
                return Some(FplState::from_parts(n, leaf.horizontal, leaf.vertical));
            }
            let top = self.stack.last_mut().expect("non-empty");
            let steps = &t.steps[top.mask as usize];
            if top.next < steps.len() {
                let step = steps[top.next];
                top.next += 1;
                let frame = child(t, top, depth, &step);
                self.stack.push(frame);
            } else {
                self.stack.pop();
            }
        }
    }
}

/// All FPL states of the `n x n` grid.
pub fn enumerate_states(n: usize, limits: EnumerationLimits) -> Result<States> {
    Ok(StateEnumerator::new(n, limits)?.states())
}
