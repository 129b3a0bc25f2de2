//! Counting FPL states by link pattern.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpl::enumerate::{EnumerationLimits, StateEnumerator};
use crate::fpl::{asm_count, MAX_GRID};
use crate::patterns::{catalan, LinkPattern};

/// Version tag written into every histogram file.
pub const FORMAT_VERSION: u32 = 1;

/// `counts[rank]` is the number of FPL states whose link pattern has that
/// canonical rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternHistogram {
    n: usize,
    counts: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct HistogramFile {
    format_version: u32,
    n: usize,
    total: u64,
    counts: BTreeMap<u64, u64>,
}

impl PatternHistogram {
    pub fn new(n: usize, counts: Vec<u64>) -> Result<Self> {
        let expected = catalan(n)?;
        if counts.len() as u64 != expected {
            return Err(Error::Histogram(format!(
                "n = {n} needs {expected} counts, got {}",
                counts.len()
            )));
        }
        Ok(Self { n, counts })
    }

    fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![0; catalan(n)? as usize])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, rank: usize) -> u64 {
        self.counts[rank]
    }

    pub fn count_of(&self, pattern: &LinkPattern) -> u64 {
        self.counts[pattern.rank() as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Checks the total against the product formula for `A_n`.
    pub fn check_total(&self) -> Result<()> {
        let expected = asm_count(self.n);
        if BigUint::from(self.total()) != expected {
            return Err(Error::Histogram(format!(
                "total {} differs from A_{} = {expected}",
                self.total(),
                self.n
            )));
        }
        Ok(())
    }

    fn add(&mut self, other: &Self) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// CSV with a comment header carrying the format version, `n` and total.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = format!(
            "# format_version={FORMAT_VERSION} n={} total={}\nrank,match_array,count\n",
            self.n,
            self.total()
        );
        for (rank, &count) in self.counts.iter().enumerate() {
            let pattern = LinkPattern::unrank(self.n, rank as u64)?;
            out.push_str(&format!("{rank},{pattern},{count}\n"));
        }
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty histogram file".into()))?;
        let fields: BTreeMap<&str, &str> = header
            .trim_start_matches('#')
            .split_whitespace()
            .filter_map(|kv| kv.split_once('='))
            .collect();
        let field = |key: &str| -> Result<u64> {
            fields
                .get(key)
                .ok_or_else(|| Error::Parse(format!("missing {key} in header")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad {key}: {e}")))
        };
        check_version(field("format_version")? as u32)?;
        let n = field("n")? as usize;
        let total = field("total")?;
        if lines.next() != Some("rank,match_array,count") {
            return Err(Error::Parse("missing column header".into()));
        }
        let mut hist = Self::zeros(n)?;
        let mut seen = 0;
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let cols: Vec<&str> = line.split(',').collect();
            let [rank, pattern, count] = cols[..] else {
                return Err(Error::Parse(format!("bad row {line:?}")));
            };
            let rank: usize = rank.parse().map_err(|e| Error::Parse(format!("bad rank: {e}")))?;
            let pattern: LinkPattern = pattern.parse()?;
            if pattern.n() != n || pattern.rank() as usize != rank {
                return Err(Error::Parse(format!("row {rank} does not match its pattern {pattern}")));
            }
            hist.counts[rank] = count.parse().map_err(|e| Error::Parse(format!("bad count: {e}")))?;
            seen += 1;
        }
        hist.finish_parse(seen, total)
    }

    pub fn to_json(&self) -> String {
        let file = HistogramFile {
            format_version: FORMAT_VERSION,
            n: self.n,
            total: self.total(),
            counts: self.counts.iter().enumerate().map(|(r, &c)| (r as u64, c)).collect(),
        };
        serde_json::to_string_pretty(&file).expect("histogram serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: HistogramFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_version(file.format_version)?;
        let mut hist = Self::zeros(file.n)?;
        for (&rank, &count) in &file.counts {
            let slot = hist
                .counts
                .get_mut(rank as usize)
                .ok_or_else(|| Error::Parse(format!("rank {rank} out of range")))?;
            *slot = count;
        }
        hist.finish_parse(file.counts.len(), file.total)
    }

    fn finish_parse(self, rows: usize, total: u64) -> Result<Self> {
        if rows != self.counts.len() {
            return Err(Error::Parse(format!("expected {} rows, got {rows}", self.counts.len())));
        }
        if self.total() != total {
            return Err(Error::Parse(format!("declared total {total} but counts sum to {}", self.total())));
        }
        Ok(self)
    }
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported format version {v}")));
    }
    Ok(())
}

/// Tallies every FPL state of the `n x n` grid by link pattern.
///
/// With `workers > 1` the search is split at a fixed prefix depth and each
/// worker fills a private histogram; the sums are identical to a
/// single-threaded run.
pub fn histogram(n: usize, workers: usize, limits: EnumerationLimits) -> Result<PatternHistogram> {
    let enumerator = StateEnumerator::new(n, limits)?;
    if workers <= 1 {
        let mut hist = PatternHistogram::zeros(n)?;
        tally(&enumerator, enumerator.states(), &mut hist)?;
        hist.check_total()?;
        return Ok(hist);
    }
    let depth = enumerator.split_depth(16 * workers);
    let prefixes = enumerator.prefixes(depth);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Histogram(format!("cannot start worker pool: {e}")))?;
    let partials: Vec<PatternHistogram> = pool.install(|| {
        prefixes
            .par_iter()
            .map(|prefix| {
                let mut hist = PatternHistogram::zeros(n)?;
                tally(&enumerator, enumerator.states_from(prefix), &mut hist)?;
                Ok(hist)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut hist = PatternHistogram::zeros(n)?;
    for part in &partials {
        hist.add(part);
    }
    hist.check_total()?;
    Ok(hist)
}

fn tally(
    enumerator: &StateEnumerator,
    states: impl Iterator<Item = crate::fpl::FplState>,
    hist: &mut PatternHistogram,
) -> Result<()> {
    let mut scratch = [0u8; 2 * MAX_GRID];
    let scratch = &mut scratch[..2 * enumerator.n()];
    for state in states {
        let rank = state.link_pattern_rank(scratch)?;
        hist.counts[rank as usize] += 1;
    }
    Ok(())
}
