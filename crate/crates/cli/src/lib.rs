//! Command-line front end for polyhaar.
//!
//! Exit codes: 0 success, 1 `verify` found a mismatch, 2 bad input
//! (parse, tile or validation errors), 3 I/O failure.

pub mod bench;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use polyhaar::io::{format_g17, parse_pattern, serialize_pattern, write_bench_rows, write_coefficients, ParseError};
use polyhaar::pattern::{generate_synthetic, GenerateError, SyntheticKind, TileError, Violation};
use polyhaar::transform::{dht_transform, pcht_pattern, rasterize, CoefficientSet, RasterMode};
use polyhaar::{Pattern, Tile};
use thiserror::Error;

use bench::{run_bench, summarize, BenchConfig, BenchError, CountSpec};

/// Largest coefficient difference `verify` accepts.
pub const VERIFY_TOLERANCE: f64 = 1e-9;
/// Mismatches listed by a failing `verify`.
pub const VERIFY_LISTED: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "polyhaar", version, about = "Haar coefficients of polygon patterns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pruned continuous transform of a pattern file.
    Transform {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        opts: PatternOpts,
    },
    /// Rasterize, then run the dense discrete transform.
    Dht {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value = "binary-sample")]
        mode: RasterMode,
        #[command(flatten)]
        opts: PatternOpts,
    },
    /// Check that both transforms agree on a pattern.
    Verify {
        input: PathBuf,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Write a synthetic pattern file.
    Gen {
        kind: SyntheticKind,
        #[arg(long, default_value_t = 16)]
        count: usize,
        #[arg(long, default_value_t = 1024)]
        size: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        depth: Option<u32>,
        output: PathBuf,
    },
    /// Time both transforms over synthetic patterns and write CSV rows.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct PatternOpts {
    /// Override the depth given in the file.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Check containment, simplicity and disjointness first.
    #[arg(long)]
    pub validate: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [128u64, 256, 512, 1024])]
    pub sizes: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "contact-array")]
    pub kinds: Vec<SyntheticKind>,
    /// Polygons per pattern, the same at every size.
    #[arg(long, value_delimiter = ',', conflicts_with = "density")]
    pub counts: Option<Vec<usize>>,
    /// Polygons per 64x64 block, so the count grows with the tile.
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long, default_value_t = 5)]
    pub repeat: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Patterns per size, kind and count.
    #[arg(long, default_value_t = 1)]
    pub patterns: usize,
    /// Build the full coefficient sets instead of a checksum.
    #[arg(long)]
    pub store_coefficients: bool,
    /// Allocate the baseline's raster and buffers on every run.
    #[arg(long)]
    pub fresh_dht_buffers: bool,
    pub output: PathBuf,
}

impl BenchArgs {
    pub fn config(&self) -> BenchConfig {
        let counts = match (&self.counts, self.density) {
            (Some(c), _) => CountSpec::Fixed(c.clone()),
            (None, Some(d)) => CountSpec::Density(d),
            (None, None) => CountSpec::Density(1.0),
        };
        BenchConfig {
            sizes: self.sizes.clone(),
            kinds: self.kinds.clone(),
            counts,
            repeat: self.repeat,
            seed: self.seed,
            patterns: self.patterns,
            store_coefficients: self.store_coefficients,
            fresh_dht_buffers: self.fresh_dht_buffers,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: line {}: {source}", path.display(), source.line())]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("invalid tile: {0}")]
    Tile(#[from] TileError),
    #[error("validation failed: {0}")]
    Invalid(Violation),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Bench(#[from] BenchError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 3,
            _ => 2,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn load(path: &Path, depth: Option<u32>, validate: bool) -> Result<Pattern, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut pattern = parse_pattern(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })?;
    if let Some(d) = depth {
        pattern = pattern.with_depth(d)?;
    }
    if validate {
        pattern.validate().map_err(CliError::Invalid)?;
    }
    Ok(pattern)
}

fn save(path: &Path, write: impl FnOnce(&mut BufWriter<File>) -> io::Result<usize>) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path).map_err(io_err(path))?);
    write(&mut out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

fn save_coefficients(path: &Path, cs: &CoefficientSet) -> Result<(), CliError> {
    save(path, |w| write_coefficients(cs, w))
}

fn dht_of(pattern: &Pattern, mode: RasterMode) -> CoefficientSet {
    dht_transform(&rasterize(pattern, mode), pattern.tile()).expect("raster built from the pattern's own tile")
}

/// Runs one command and returns the process exit code. Diagnostics go to
/// stderr, `verify` and `bench` summaries to stdout and stderr respectively.
pub fn run(cli: Cli) -> i32 {
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Transform { input, output, opts } => {
            let pattern = load(&input, opts.depth, opts.validate)?;
            save_coefficients(&output, &pcht_pattern(&pattern).0)?;
            Ok(0)
        }
        Command::Dht { input, output, mode, opts } => {
            let pattern = load(&input, opts.depth, opts.validate)?;
            save_coefficients(&output, &dht_of(&pattern, mode))?;
            Ok(0)
        }
        Command::Verify { input, depth } => {
            let pattern = load(&input, depth, false)?;
            let (pcht, _) = pcht_pattern(&pattern);
            let dht = dht_of(&pattern, RasterMode::ExactCoverage);
            let max = pcht.max_abs_diff(&dht);
            println!("max |Δ| = {}", format_g17(max));
            if max <= VERIFY_TOLERANCE {
                return Ok(0);
            }
            let mismatches = pcht.mismatches(&dht, VERIFY_TOLERANCE);
            println!("{} coefficients differ (pcht vs dht):", mismatches.len());
            for m in mismatches.iter().take(VERIFY_LISTED) {
                println!("  {m}");
            }
            Ok(1)
        }
        Command::Gen { kind, count, size, seed, depth, output } => {
            let tile = match depth {
                Some(d) => Tile::new(size, size, d)?,
                None => Tile::with_default_depth(size, size)?,
            };
            let pattern = generate_synthetic(kind, tile, count, seed)?;
            let text = serialize_pattern(&pattern);
            save(&output, |w| w.write_all(text.as_bytes()).map(|_| text.len()))?;
            Ok(0)
        }
        Command::Bench(args) => {
            let rows = run_bench(&args.config(), |r| {
                eprintln!(
                    "{} {}: K={} pcht={}ns dht={}ns speedup={:.3}",
                    r.tile_size,
                    r.pattern_id,
                    r.vertices,
                    r.pcht_ns,
                    r.dht_ns,
                    r.speedup()
                )
            })?;
            save(&args.output, |w| write_bench_rows(&rows, w))?;
            for s in summarize(&rows) {
                eprintln!(
                    "size {}: mean speedup {:.3} ± {:.3} (95% CI, n={})",
                    s.tile_size, s.mean, s.half_width, s.patterns
                );
            }
            Ok(0)
        }
    }
}
