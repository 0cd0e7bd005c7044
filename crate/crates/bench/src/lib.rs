//! Fixed inputs shared by the criterion benchmarks.

use polyhaar::pattern::{generate_synthetic, SyntheticKind};
use polyhaar::{Pattern, Tile};

/// Seed used for every fixture so runs compare like with like.
pub const FIXTURE_SEED: u64 = 0x5eed;

/// Square tile at full depth.
pub fn tile(size: u64) -> Tile {
    Tile::with_default_depth(size, size).expect("benchmark sizes are powers of two")
}

/// Contact array with one contact per 64x64 block.
pub fn contacts_at_unit_density(size: u64) -> Pattern {
    let count = ((size / 64) * (size / 64)) as usize;
    generate_synthetic(SyntheticKind::ContactArray, tile(size), count, FIXTURE_SEED).expect("density fits")
}

/// Contact array on a 1024 tile with `vertices / 4` contacts.
pub fn contacts_with_vertices(vertices: usize) -> Pattern {
    generate_synthetic(SyntheticKind::ContactArray, tile(1024), vertices / 4, FIXTURE_SEED)
        .expect("count fits a 1024 tile")
}

/// Random rectilinear outlines on a 1024 tile.
pub fn outlines(count: usize) -> Pattern {
    generate_synthetic(SyntheticKind::RandomRectilinear, tile(1024), count, FIXTURE_SEED)
        .expect("count fits a 1024 tile")
}
