use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An alternating-sign matrix: entries in {-1, 0, 1}, every row and column
/// sums to 1 and its nonzero entries alternate in sign.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AsmMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl AsmMatrix {
    /// Validates a row-major entry list of length `n * n`.
    pub fn new(n: usize, entries: Vec<i8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAsm("matrix must be at least 1x1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidAsm(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| !(-1..=1).contains(*e)) {
            return Err(Error::InvalidAsm(format!("entry {bad} outside {{-1, 0, 1}}")));
        }
        let m = Self { n, entries };
        for r in 0..n {
            check_line((0..n).map(|c| m.get(r, c))).map_err(|e| Error::InvalidAsm(format!("row {}: {e}", r + 1)))?;
        }
        for c in 0..n {
            check_line((0..n).map(|r| m.get(r, c)))
                .map_err(|e| Error::InvalidAsm(format!("column {}: {e}", c + 1)))?;
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidAsm("matrix is not square".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self::new(n, entries)
    }

    /// Rebuilds the matrix from the column partial-sum masks
    /// `S_0 = 0, S_1, ..., S_n = full` (bit `c` of `S_r` is the sum of the
    /// first `r` entries of column `c`). The masks must come from a valid ASM.
    pub(crate) fn from_masks(n: usize, masks: &[u32]) -> Self {
        debug_assert_eq!(masks.len(), n + 1);
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let before = (masks[r] >> c) & 1;
                let after = (masks[r + 1] >> c) & 1;
                entries.push(after as i8 - before as i8);
            }
        }
        Self { n, entries }
    }

    /// Column partial-sum masks, the inverse of [`AsmMatrix::from_masks`].
    pub(crate) fn masks(&self) -> Vec<u32> {
        let mut masks = Vec::with_capacity(self.n + 1);
        let mut current = 0u32;
        masks.push(current);
        for r in 0..self.n {
            for c in 0..self.n {
                match self.get(r, c) {
                    1 => current |= 1 << c,
                    -1 => current &= !(1 << c),
                    _ => {}
                }
            }
            masks.push(current);
        }
        masks
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.n)
    }

    /// Number of `-1` entries.
    pub fn negatives(&self) -> usize {
        self.entries.iter().filter(|&&e| e < 0).count()
    }

    /// Parses a block of whitespace-separated rows, one row per line.
    pub fn parse_block(block: &str) -> Result<Self> {
        let rows = block
            .lines()
            .map(str::trim)
            .filter(|line| !line.is_empty())
            .map(|line| {
                line.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|tok| !tok.is_empty())
                    .map(|tok| tok.parse::<i8>().map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }
}

// Partial sums along the line must stay in {0, 1} and end at 1.
fn check_line(line: impl Iterator<Item = i8>) -> std::result::Result<(), String> {
    let mut sum = 0i32;
    for e in line {
        sum += i32::from(e);
        if !(0..=1).contains(&sum) {
            return Err("nonzero entries do not alternate starting with +1".into());
        }
    }
    if sum != 1 {
        return Err(format!("sums to {sum}, expected 1"));
    }
    Ok(())
}

impl fmt::Display for AsmMatrix {
    /// Rows on separate lines, entries space-separated and right-aligned.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.rows().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            let line: Vec<String> = row.iter().map(|e| format!("{e:>2}")).collect();
            f.write_str(&line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for AsmMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AsmMatrix({}x{}) [", self.n, self.n)?;
        for row in self.rows() {
            write!(f, "{row:?}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for AsmMatrix {
    type Err = Error;

    /// Accepts either a multi-line block or a single line with rows
    /// separated by `;`, e.g. `0 1 0; 1 -1 1; 0 1 0`.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_block(&s.replace(';', "\n"))
    }
}

/// Writes matrices as blocks separated by blank lines.
pub fn write_asm_blocks<'a>(matrices: impl IntoIterator<Item = &'a AsmMatrix>) -> String {
    let mut out = String::new();
    for (i, m) in matrices.into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&m.to_string());
        out.push('\n');
    }
    out
}

/// Parses the output of [`write_asm_blocks`].
pub fn read_asm_blocks(text: &str) -> Result<Vec<AsmMatrix>> {
    let mut blocks = Vec::new();
    let mut current = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                blocks.push(AsmMatrix::parse_block(&current)?);
                current.clear();
            }
        } else {
            current.push_str(line);
            current.push('\n');
        }
    }
    if !current.is_empty() {
        blocks.push(AsmMatrix::parse_block(&current)?);
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_alternation() {
        assert!(AsmMatrix::from_rows(&[vec![1]]).is_ok());
        assert!(AsmMatrix::from_rows(&[vec![0, 1, 0], vec![1, -1, 1], vec![0, 1, 0]]).is_ok());
        assert!(AsmMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).is_ok());
        // -1 first in its row
        assert!(AsmMatrix::from_rows(&[vec![-1, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]).is_err());
        assert!(AsmMatrix::from_rows(&[vec![1, 1], vec![0, 0]]).is_err());
        assert!(AsmMatrix::from_rows(&[vec![2]]).is_err());
        assert!(AsmMatrix::from_rows(&[vec![1, 0]]).is_err());
        assert!(AsmMatrix::new(0, vec![]).is_err());
    }

    #[test]
    fn masks_round_trip() {
        let m: AsmMatrix = "0 1 0; 1 -1 1; 0 1 0".parse().unwrap();
        let masks = m.masks();
        assert_eq!(masks, vec![0b000, 0b010, 0b101, 0b111]);
        assert_eq!(AsmMatrix::from_masks(3, &masks), m);
    }

    #[test]
    fn text_blocks_round_trip() {
        let a = AsmMatrix::identity(3).unwrap();
        let b: AsmMatrix = "0 1 0; 1 -1 1; 0 1 0".parse().unwrap();
        let text = write_asm_blocks([&a, &b]);
        assert_eq!(text, " 1  0  0\n 0  1  0\n 0  0  1\n\n 0  1  0\n 1 -1  1\n 0  1  0\n");
        assert_eq!(read_asm_blocks(&text).unwrap(), vec![a, b]);
    }
}
