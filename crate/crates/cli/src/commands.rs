use std::fmt::Write as _;
use std::fs;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use linkcount::fpl::{enumerate_states, render_pattern_svg, render_state_ascii, FORMAT_VERSION};
use linkcount::spectra::{perron_vector, verify_with, HamiltonianLimits, PerronFailure, VerifyOptions};
use linkcount::stochastic::{sample_stationary, PatternDistribution, SampleOptions, SampleReport};
use linkcount::{
    asm_count, build_hamiltonian, histogram, AsmMatrix, BigIntVector, EnumerationLimits, LinkPattern,
    PatternHistogram, SparseIntMatrix,
};
use serde::{Deserialize, Serialize};

use crate::cache::{Cache, Lookup};
use crate::{EnumerateArgs, Format, GroundstateArgs, Output, RenderArgs, SampleArgs, Size, VerifyArgs};

/// Enumerations at or above this size need `--long`.
const LONG_N: usize = 8;

#[derive(Serialize, Deserialize)]
struct VectorFile {
    format_version: u32,
    n: usize,
    components: BigIntVector,
}

fn n_of(size: &Size) -> usize {
    size.n as usize
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_format(format: Format, allowed: &[Format], command: &str) -> Result<()> {
    if !allowed.contains(&format) {
        let names: Vec<String> = allowed.iter().map(|f| format!("{f:?}").to_lowercase()).collect();
        bail!("{command} supports --format {}", names.join(", "));
    }
    Ok(())
}

fn load_histogram(size: &Size, workers: u64, long: bool, cache: &Cache) -> Result<PatternHistogram> {
    let n = n_of(size);
    let limits = EnumerationLimits { max_n: size.max_fpl_n };
    limits.check(n).with_context(|| format!("raise --max-fpl-n to enumerate n = {n}"))?;
    if n >= LONG_N && !long {
        bail!("n = {n} enumerates {} states; pass --long to run it", asm_count(n));
    }
    let compute = || -> Result<String> {
        let started = Instant::now();
        let hist = histogram(n, workers as usize, limits)?;
        eprintln!("enumerated {} states in {:.2?}", hist.total(), started.elapsed());
        Ok(hist.to_json())
    };
    let text = cache.get_or_compute(n, "histogram.json", compute)?;
    match PatternHistogram::from_json(&text) {
        Ok(hist) => Ok(hist),
        Err(e) => {
            eprintln!("warning: cached histogram unreadable ({e}); recomputing");
            let text = compute()?;
            cache.store(n, "histogram.json", &text)?;
            Ok(PatternHistogram::from_json(&text)?)
        }
    }
}

fn load_matrix(size: &Size, cache: &Cache) -> Result<SparseIntMatrix> {
    let n = n_of(size);
    let limits = HamiltonianLimits { max_dim: size.max_dim };
    let build = || -> Result<String> {
        Ok(build_hamiltonian(n, limits)?.to_coordinate_text())
    };
    // Checked up front so a cached copy cannot bypass the ceiling.
    let dim = linkcount::catalan(n)?;
    if dim > size.max_dim as u64 {
        bail!("n = {n} has {dim} link patterns, above --max-dim {}", size.max_dim);
    }
    let text = cache.get_or_compute(n, "matrix.txt", build)?;
    match SparseIntMatrix::from_coordinate_text(&text) {
        Ok(h) if h.n() == n => Ok(h),
        _ => {
            let text = build()?;
            cache.store(n, "matrix.txt", &text)?;
            Ok(SparseIntMatrix::from_coordinate_text(&text)?)
        }
    }
}

fn load_ground_state(size: &Size, cache: &Cache) -> Result<(SparseIntMatrix, Result<BigIntVector, PerronFailure>)> {
    let n = n_of(size);
    let h = load_matrix(size, cache)?;
    if let Lookup::Hit(text) = cache.load(n, "vector.json") {
        if let Ok(file) = serde_json::from_str::<VectorFile>(&text) {
            if file.format_version == FORMAT_VERSION && file.n == n {
                return Ok((h, Ok(file.components)));
            }
        }
    }
    let started = Instant::now();
    let result = perron_vector(&h).map(|p| p.vector);
    eprintln!("ground state of dimension {} in {:.2?}", h.dim(), started.elapsed());
    if let Ok(w) = &result {
        let file = VectorFile { format_version: FORMAT_VERSION, n, components: w.clone() };
        cache.store(n, "vector.json", &serde_json::to_string_pretty(&file)?)?;
    }
    Ok((h, result))
}

pub fn enumerate(args: &EnumerateArgs, cache: &Cache) -> Result<bool> {
    check_format(args.format, &[Format::Csv, Format::Json, Format::Text], "enumerate")?;
    let hist = load_histogram(&args.size, args.workers, args.long, cache)?;
    let text = match args.format {
        Format::Csv => hist.to_csv()?,
        Format::Json => hist.to_json() + "\n",
        _ => {
            let mut out = format!("n = {}, total = {}\n", hist.n(), hist.total());
            for (rank, &count) in hist.counts().iter().enumerate() {
                let pattern = LinkPattern::unrank(hist.n(), rank as u64)?;
                writeln!(out, "{rank:>6}  {:<width$}  {count}", pattern.to_string(), width = 4 * hist.n())?;
            }
            out
        }
    };
    emit(&args.output, &text)?;
    eprintln!(
        "n = {}: {} states over {} link patterns, largest count {}",
        hist.n(),
        hist.total(),
        hist.counts().len(),
        hist.max()
    );
    Ok(true)
}

pub fn groundstate(args: &GroundstateArgs, cache: &Cache) -> Result<bool> {
    check_format(args.format, &[Format::Csv, Format::Json, Format::Text], "groundstate")?;
    let n = n_of(&args.size);
    let (h, result) = load_ground_state(&args.size, cache)?;
    if let Some(path) = &args.matrix {
        fs::write(path, h.to_coordinate_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    let w = match result {
        Ok(w) => w,
        Err(failure) => {
            eprintln!("n = {n}: {failure}");
            return Ok(false);
        }
    };
    let sum = w.sum();
    let max = w.max().cloned().unwrap_or_default();
    let text = match args.format {
        Format::Json => {
            let body = serde_json::json!({
                "format_version": FORMAT_VERSION,
                "n": n,
                "dim": w.len(),
                "sum": sum.to_string(),
                "max": max.to_string(),
                "components": w,
            });
            serde_json::to_string_pretty(&body)? + "\n"
        }
        Format::Csv => {
            let mut out = format!("# format_version={FORMAT_VERSION} n={n} sum={sum}\nrank,match_array,component\n");
            for (rank, x) in w.components().iter().enumerate() {
                writeln!(out, "{rank},{},{x}", LinkPattern::unrank(n, rank as u64)?)?;
            }
            out
        }
        _ => {
            let mut out = String::new();
            for (rank, x) in w.components().iter().enumerate() {
                writeln!(out, "{rank:>6}  {:<width$}  {x}", LinkPattern::unrank(n, rank as u64)?.to_string(), width = 4 * n)?;
            }
            out
        }
    };
    emit(&args.output, &text)?;
    eprintln!("n = {n}: sum of components {sum}, largest component {max}");
    Ok(true)
}

pub fn verify(args: &VerifyArgs, cache: &Cache) -> Result<bool> {
    check_format(args.format, &[Format::Json, Format::Text], "verify")?;
    let n = n_of(&args.size);
    let hist = load_histogram(&args.size, args.workers, args.long, cache)?;
    let h = load_matrix(&args.size, cache)?;
    let started = Instant::now();
    let report = verify_with(&hist, &h, VerifyOptions { workers: args.workers as usize, ..VerifyOptions::default() });
    eprintln!("checks ran in {:.2?}", started.elapsed());
    let json = report.to_json() + "\n";
    cache.store(n, "report.json", &json)?;
    let text = match args.format {
        Format::Json => json,
        _ => {
            let mut out = String::new();
            for c in &report.checks {
                writeln!(out, "{} {:<24} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.details)?;
            }
            out
        }
    };
    emit(&args.output, &text)?;
    let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
    if failed.is_empty() {
        eprintln!("n = {n}: all {} checks pass", report.checks.len());
    } else {
        eprintln!("n = {n}: {} of {} checks failed: {}", failed.len(), report.checks.len(), failed.join(", "));
    }
    Ok(report.pass)
}

pub fn sample(args: &SampleArgs, cache: &Cache) -> Result<bool> {
    let n = n_of(&args.size);
    let options = SampleOptions {
        burn_in: args.burn_in,
        samples: args.samples,
        seed: args.seed,
        chains: args.chains as usize,
    };
    let (_, ground) = load_ground_state(&args.size, cache)?;
    let law = match ground {
        Ok(w) => PatternDistribution::from_vector(n, &w)?,
        Err(failure) => {
            eprintln!("n = {n}: no exact law to compare with: {failure}");
            return Ok(false);
        }
    };
    let sample = sample_stationary(n, options)?;
    let report = SampleReport::new(&sample, options, Some(&law));
    emit(&args.output, &(report.to_json() + "\n"))?;
    eprintln!(
        "n = {n}, seed {}: total variation {:.5} (tolerance {:.5})",
        args.seed,
        report.tv_distance.unwrap_or(f64::NAN),
        report.tolerance
    );
    Ok(report.pass)
}

pub fn render(args: &RenderArgs) -> Result<bool> {
    check_format(args.format, &[Format::Text, Format::Svg], "render")?;
    let text = if let Some(pattern) = &args.pattern {
        let pattern: LinkPattern = pattern.parse()?;
        match args.format {
            Format::Svg => render_pattern_svg(&pattern),
            _ => {
                let arcs: Vec<String> = pattern.arcs().iter().map(|(a, b)| format!("({a},{b})")).collect();
                format!("{}\n{}\n", pattern.to_parens(), arcs.join(" "))
            }
        }
    } else {
        let state = if let Some(asm) = &args.asm {
            asm.parse::<AsmMatrix>()?.to_state()?
        } else if let Some(index) = args.index {
            let n = args.n.expect("clap requires -n with --index");
            enumerate_states(n, EnumerationLimits::default())?
                .nth(index as usize)
                .with_context(|| format!("n = {n} has only {} states", asm_count(n)))?
        } else {
            bail!("render needs one of --asm, --index or --pattern");
        };
        match args.format {
            Format::Svg => render_pattern_svg(&state.link_pattern()?),
            _ => format!("{}link pattern: {}\n", render_state_ascii(&state), state.link_pattern()?),
        }
    };
    emit(&args.output, &text)?;
    Ok(true)
}
