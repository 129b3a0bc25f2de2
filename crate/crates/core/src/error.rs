use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid link pattern: {0}")]
    InvalidPattern(String),

    #[error("pattern size n = {n} is not supported (must be 1..={max})")]
    UnsupportedPatternSize { n: usize, max: usize },

    #[error("rank {rank} out of range for n = {n} (there are {count} patterns)")]
    RankOutOfRange { n: usize, rank: u64, count: u64 },

    #[error("operator index {index} out of range 1..={max}")]
    OperatorIndex { index: usize, max: usize },

    #[error("invalid alternating-sign matrix: {0}")]
    InvalidAsm(String),

    #[error("invalid FPL state: {0}")]
    InvalidState(String),

    #[error("path tracing failed: {0}")]
    Trace(String),

    #[error("{what}: n = {n} exceeds the configured ceiling {max}")]
    Capacity { what: &'static str, n: usize, max: usize },

    #[error("matrix dimension {dim} exceeds the configured ceiling {max}")]
    Dimension { dim: usize, max: usize },

    #[error("histogram mismatch: {0}")]
    Histogram(String),

    #[error("sampler needs at least one sample")]
    ZeroSamples,

    #[error("parse error: {0}")]
    Parse(String),
}
