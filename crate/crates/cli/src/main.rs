use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod cache;
mod commands;

use cache::{Cache, CACHE_ENV};

/// Fully packed loop counts versus the O(1) loop-model ground state.
#[derive(Debug, Parser)]
#[command(name = "linkcount", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Root directory for cached artifacts.
    #[arg(long, global = true, env = CACHE_ENV, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Neither read nor write cached artifacts.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count FPL states by link pattern.
    Enumerate(EnumerateArgs),
    /// Exact Perron eigenvector of the loop Hamiltonian.
    Groundstate(GroundstateArgs),
    /// Compare the eigenvector with the FPL counts; exits 1 on any failed check.
    Verify(VerifyArgs),
    /// Run the random-operator Markov chain and compare with the exact law.
    Sample(SampleArgs),
    /// Draw an FPL state (ASCII) or a link pattern (SVG chord diagram).
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
    Svg,
}

#[derive(Debug, Args)]
pub struct Size {
    /// Grid size; link patterns have 2n points.
    #[arg(short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,

    /// Largest n the enumerator accepts.
    #[arg(long, default_value_t = linkcount::fpl::DEFAULT_MAX_GRID)]
    max_fpl_n: usize,

    /// Largest Hamiltonian dimension (number of link patterns).
    #[arg(long, default_value_t = linkcount::spectra::DEFAULT_MAX_DIM)]
    max_dim: usize,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the artifact here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    size: Size,
    #[command(flatten)]
    output: Output,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads for the enumeration.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Allow runs with n >= 8 (millions of states).
    #[arg(long)]
    long: bool,
}

#[derive(Debug, Args)]
pub struct GroundstateArgs {
    #[command(flatten)]
    size: Size,
    #[command(flatten)]
    output: Output,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Also write the Hamiltonian as coordinate text.
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    size: Size,
    #[command(flatten)]
    output: Output,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(long)]
    long: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    size: Size,
    #[command(flatten)]
    output: Output,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 1_000)]
    burn_in: u64,
    /// Independent chains with derived seeds; counts are summed.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    chains: u64,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Alternating-sign matrix with rows separated by `;`.
    #[arg(long, group = "what", allow_hyphen_values = true)]
    asm: Option<String>,
    /// Index of a state in enumeration order (needs -n).
    #[arg(long, group = "what", requires = "n")]
    index: Option<u64>,
    /// Link pattern as its 1-based partner list, e.g. "2 1 4 3".
    #[arg(long, group = "what")]
    pattern: Option<String>,
    #[arg(short = 'n')]
    n: Option<usize>,
    #[command(flatten)]
    output: Output,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = if cli.no_cache { Cache::new(None) } else { Cache::new(Cache::default_root(cli.cache_dir)) };
    let result = match cli.command {
        Command::Enumerate(args) => commands::enumerate(&args, &cache),
        Command::Groundstate(args) => commands::groundstate(&args, &cache),
        Command::Verify(args) => commands::verify(&args, &cache),
        Command::Sample(args) => commands::sample(&args, &cache),
        Command::Render(args) => commands::render(&args),
    };
    let _ = std::io::stdout().flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
