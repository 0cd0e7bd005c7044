//! Timing harness comparing the pruned transform with the rasterizing baseline.
//!
//! Each pattern is transformed `repeat` times by both methods after one
//! untimed warm-up run, and the median wall-clock time of each is kept.
//! Only the transform call is timed; for the baseline that includes
//! rasterization (binary-sample). In discard mode the coefficients are folded
//! into a checksum so the work cannot be optimized away. The baseline reuses
//! its buffers across repetitions unless asked to allocate them per run.

use std::hint::black_box;
use std::time::Instant;

use polyhaar::pattern::{generate_synthetic, GenerateError, SyntheticKind};
use polyhaar::transform::{
    dht_transform, dht_transform_into, pcht_pattern, pcht_pattern_into, rasterize, ChecksumSink, CoefficientSet,
    DhtWorkspace, RasterMode,
};
use polyhaar::{BenchRecord, Pattern, Tile, TransformStats};
use thiserror::Error;

/// How many polygons each generated pattern gets.
#[derive(Clone, Debug, PartialEq)]
pub enum CountSpec {
    /// The same counts at every tile size.
    Fixed(Vec<usize>),
    /// Polygons per 64x64 block of tile area, rounded to the nearest integer.
    Density(f64),
}

impl CountSpec {
    pub fn counts_for(&self, size: u64) -> Vec<usize> {
        match self {
            CountSpec::Fixed(v) => v.clone(),
            CountSpec::Density(d) => {
                let blocks = (size as f64 / 64.0).powi(2);
                vec![(d * blocks).round() as usize]
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<u64>,
    pub kinds: Vec<SyntheticKind>,
    pub counts: CountSpec,
    pub repeat: usize,
    pub seed: u64,
    /// Patterns generated per (size, kind, count).
    pub patterns: usize,
    pub store_coefficients: bool,
    /// Allocate the baseline's raster and buffers on every run.
    pub fresh_dht_buffers: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![128, 256, 512, 1024],
            kinds: vec![SyntheticKind::ContactArray],
            counts: CountSpec::Density(1.0),
            repeat: 5,
            seed: 0,
            patterns: 1,
            store_coefficients: false,
            fresh_dht_buffers: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("tile size {0} is not a power of two")]
    SizeNotPowerOfTwo(u64),
    #[error("repeat count must be at least 1")]
    NoRepetitions,
    #[error("pattern {id}: {source}")]
    Generate {
        id: String,
        #[source]
        source: GenerateError,
    },
}

/// Mean speedup over the patterns of one tile size with a 95% interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpeedupSummary {
    pub tile_size: u64,
    pub patterns: usize,
    pub mean: f64,
    /// Half-width of the normal-approximation interval; zero for one pattern.
    pub half_width: f64,
}

/// SplitMix64 finalizer; spreads structured inputs over the seed space.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator seed of one benchmark pattern, a pure function of its coordinates.
pub fn pattern_seed(base: u64, size: u64, kind: SyntheticKind, count: usize, index: usize) -> u64 {
    let k = match kind {
        SyntheticKind::ContactArray => 1,
        SyntheticKind::RandomRectilinear => 2,
    };
    [size, k, count as u64, index as u64]
        .iter()
        .fold(mix(base), |acc, &v| mix(acc ^ v))
}

pub fn pattern_id(kind: SyntheticKind, count: usize, seed: u64) -> String {
    format!("{kind}-n{count}-s{seed:016x}")
}

/// Median of a non-empty sample; the mean of the middle pair for even sizes.
pub fn median(samples: &mut [u64]) -> u64 {
    samples.sort_unstable();
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        let (a, b) = (samples[n / 2 - 1] as u128, samples[n / 2] as u128);
        ((a + b) / 2) as u64
    }
}

fn time_median(repeat: usize, mut run: impl FnMut()) -> u64 {
    run();
    let mut samples: Vec<u64> = (0..repeat)
        .map(|_| {
            let start = Instant::now();
            run();
            start.elapsed().as_nanos().max(1) as u64
        })
        .collect();
    median(&mut samples)
}

/// Median PCHT time in nanoseconds and the work counters of one run.
pub fn time_pcht(pattern: &Pattern, repeat: usize, store: bool) -> (u64, TransformStats) {
    let (_, stats) = pcht_pattern_into(pattern, &mut ChecksumSink::default());
    let ns = time_median(repeat, || {
        if store {
            black_box(pcht_pattern(black_box(pattern)));
        } else {
            let mut sink = ChecksumSink::default();
            let (dc, _) = pcht_pattern_into(black_box(pattern), &mut sink);
            black_box((dc, sink));
        }
    });
    (ns, stats)
}

/// Median time of rasterization plus the dense transform, in nanoseconds.
///
/// By default the raster and butterfly buffers are allocated once and reused
/// by every repetition. With `fresh_buffers` each run allocates its own, which
/// makes the result depend on how the allocator returns large blocks to the
/// system.
pub fn time_dht(pattern: &Pattern, repeat: usize, store: bool, fresh_buffers: bool) -> u64 {
    let tile = pattern.tile();
    let mode = RasterMode::BinarySample;
    if fresh_buffers {
        return time_median(repeat, || {
            let raster = rasterize(black_box(pattern), mode);
            if store {
                black_box(dht_transform(&raster, tile).expect("raster matches its tile"));
            } else {
                let mut sink = ChecksumSink::default();
                let out = dht_transform_into(&raster, tile, &mut sink).expect("raster matches its tile");
                black_box((out, sink));
            }
        });
    }
    let mut ws = DhtWorkspace::new(tile);
    time_median(repeat, || {
        if store {
            let mut set = CoefficientSet::new(tile);
            let (dc, _) = ws.transform_into(black_box(pattern), mode, &mut set).expect("same tile");
            set.set_dc(dc);
            set.purge_zeros();
            black_box(set);
        } else {
            let mut sink = ChecksumSink::default();
            let out = ws.transform_into(black_box(pattern), mode, &mut sink).expect("same tile");
            black_box((out, sink));
        }
    })
}

/// Benchmarks one pattern.
pub fn measure(pattern: &Pattern, id: String, config: &BenchConfig) -> BenchRecord {
    let (pcht_ns, stats) = time_pcht(pattern, config.repeat, config.store_coefficients);
    let dht_ns = time_dht(pattern, config.repeat, config.store_coefficients, config.fresh_dht_buffers);
    BenchRecord {
        tile_size: pattern.tile().width(),
        pattern_id: id,
        vertices: pattern.vertex_count(),
        polygons: pattern.len(),
        pcht_ns,
        dht_ns,
        nodes_visited: stats.nodes_visited,
    }
}

/// Runs the whole sweep sequentially, calling `progress` after each pattern.
pub fn run_bench(
    config: &BenchConfig,
    mut progress: impl FnMut(&BenchRecord),
) -> Result<Vec<BenchRecord>, BenchError> {
    if config.repeat == 0 {
        return Err(BenchError::NoRepetitions);
    }
    if let Some(&bad) = config.sizes.iter().find(|s| !s.is_power_of_two()) {
        return Err(BenchError::SizeNotPowerOfTwo(bad));
    }
    let mut rows = Vec::new();
    for &size in &config.sizes {
        let tile = Tile::with_default_depth(size, size).map_err(|_| BenchError::SizeNotPowerOfTwo(size))?;
        for &kind in &config.kinds {
            for count in config.counts.counts_for(size) {
                for index in 0..config.patterns {
                    let seed = pattern_seed(config.seed, size, kind, count, index);
                    let id = pattern_id(kind, count, seed);
                    let pattern = generate_synthetic(kind, tile, count, seed)
                        .map_err(|source| BenchError::Generate { id: id.clone(), source })?;
                    let row = measure(&pattern, id, config);
                    progress(&row);
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

/// Per-size mean speedup with a 95% normal-approximation interval, in the
/// order sizes first appear.
pub fn summarize(rows: &[BenchRecord]) -> Vec<SpeedupSummary> {
    let mut sizes: Vec<u64> = Vec::new();
    for r in rows {
        if !sizes.contains(&r.tile_size) {
            sizes.push(r.tile_size);
        }
    }
    sizes
        .into_iter()
        .map(|size| {
            let s: Vec<f64> = rows.iter().filter(|r| r.tile_size == size).map(|r| r.speedup()).collect();
            let n = s.len() as f64;
            let mean = s.iter().sum::<f64>() / n;
            let half_width = if s.len() > 1 {
                let var = s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
                1.96 * var.sqrt() / n.sqrt()
            } else {
                0.0
            };
            SpeedupSummary { tile_size: size, patterns: s.len(), mean, half_width }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(size: u64, pcht: u64, dht: u64) -> BenchRecord {
        BenchRecord {
            tile_size: size,
            pattern_id: String::new(),
            vertices: 0,
            polygons: 0,
            pcht_ns: pcht,
            dht_ns: dht,
            nodes_visited: 0,
        }
    }

    #[test]
    fn medians() {
        assert_eq!(median(&mut [5, 1, 3]), 3);
        assert_eq!(median(&mut [4, 1, 3, 2]), 2);
        assert_eq!(median(&mut [7]), 7);
    }

    #[test]
    fn summary_interval() {
        // Speedups 1, 2, 3: mean 2, sample sd 1.
        let rows = [row(64, 1, 1), row(64, 1, 2), row(64, 1, 3), row(128, 2, 8)];
        let s = summarize(&rows);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].mean, 2.0);
        assert!((s[0].half_width - 1.96 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(s[1], SpeedupSummary { tile_size: 128, patterns: 1, mean: 4.0, half_width: 0.0 });
    }

    #[test]
    fn density_counts() {
        assert_eq!(CountSpec::Density(1.0).counts_for(128), vec![4]);
        assert_eq!(CountSpec::Density(0.5).counts_for(1024), vec![128]);
        assert_eq!(CountSpec::Fixed(vec![1, 2]).counts_for(64), vec![1, 2]);
    }

    #[test]
    fn seeds_depend_on_every_coordinate() {
        let k = SyntheticKind::ContactArray;
        let base = pattern_seed(0, 64, k, 4, 0);
        assert_eq!(base, pattern_seed(0, 64, k, 4, 0));
        for other in [
            pattern_seed(1, 64, k, 4, 0),
            pattern_seed(0, 128, k, 4, 0),
            pattern_seed(0, 64, SyntheticKind::RandomRectilinear, 4, 0),
            pattern_seed(0, 64, k, 5, 0),
            pattern_seed(0, 64, k, 4, 1),
        ] {
            assert_ne!(base, other);
        }
    }

    #[test]
    fn small_sweep() {
        let config = BenchConfig {
            sizes: vec![64],
            counts: CountSpec::Fixed(vec![4]),
            repeat: 3,
            ..BenchConfig::default()
        };
        let rows = run_bench(&config, |_| {}).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].polygons, 4);
        assert_eq!(rows[0].vertices, 16);
        assert!(rows[0].speedup() > 0.0);
        assert!(rows[0].nodes_visited < Tile::with_default_depth(64, 64).unwrap().dense_node_count());
    }

    #[test]
    fn rejects_bad_config() {
        let bad = BenchConfig { sizes: vec![96], ..BenchConfig::default() };
        assert!(matches!(run_bench(&bad, |_| {}), Err(BenchError::SizeNotPowerOfTwo(96))));
        let none = BenchConfig { repeat: 0, ..BenchConfig::default() };
        assert!(matches!(run_bench(&none, |_| {}), Err(BenchError::NoRepetitions)));
    }
}
