#![allow(dead_code)]

use polyhaar::geometry::{Point, Polygon};
use polyhaar::pattern::{generate_synthetic, Item, SyntheticKind};
use polyhaar::{Pattern, Tile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Synthetic rectilinear pattern; kind and count vary with the seed.
pub fn rectilinear_pattern(tile: Tile, seed: u64) -> Pattern {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let kind = if seed.is_multiple_of(2) {
        SyntheticKind::ContactArray
    } else {
        SyntheticKind::RandomRectilinear
    };
    let count = rng.gen_range(1..=6);
    generate_synthetic(kind, tile, count, seed).expect("small counts always fit")
}

/// Random triangle with real coordinates inside `[x0, x0+w] x [y0, y0+h]`.
pub fn triangle_in(rng: &mut impl Rng, x0: f64, y0: f64, w: f64, h: f64) -> Polygon {
    loop {
        let pts: Vec<Point> = (0..3)
            .map(|_| Point::new(x0 + rng.gen_range(0.0..w), y0 + rng.gen_range(0.0..h)))
            .collect();
        if let Ok(p) = Polygon::new(pts) {
            if p.area() > 1e-3 * w * h {
                return p;
            }
        }
    }
}

/// Triangles in disjoint slots of a 4x4 grid, with random real weights.
pub fn triangle_pattern(tile: Tile, seed: u64) -> Pattern {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (sw, sh) = (tile.width() as f64 / 4.0, tile.height() as f64 / 4.0);
    let mut items = Vec::new();
    for gy in 0..4 {
        for gx in 0..4 {
            if rng.gen_bool(0.5) {
                let tri = triangle_in(&mut rng, gx as f64 * sw, gy as f64 * sh, sw, sh);
                items.push(Item::new(tri, rng.gen_range(-2.0..2.0)));
            }
        }
    }
    Pattern::new(tile, items)
}

/// Star-shaped simple polygon with `n` vertices around `(cx, cy)`.
pub fn star_polygon(rng: &mut impl Rng, cx: f64, cy: f64, radius: f64, n: usize) -> Polygon {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let pts = angles
            .iter()
            .map(|a| {
                let r = radius * rng.gen_range(0.2..1.0);
                Point::new(cx + r * a.cos(), cy + r * a.sin())
            })
            .collect();
        if let Ok(p) = Polygon::new(pts) {
            if p.is_simple() {
                return p;
            }
        }
    }
}

/// One rectilinear integer polygon inside a 64x64 tile.
pub fn rectilinear_polygon(seed: u64) -> Polygon {
    let tile = Tile::new(64, 64, 6).unwrap();
    let p = generate_synthetic(SyntheticKind::RandomRectilinear, tile, 1, seed).unwrap();
    p.items()[0].polygon.clone()
}

pub fn reversed(poly: &Polygon) -> Polygon {
    let mut pts = poly.points();
    pts.reverse();
    Polygon::new(pts).unwrap()
}
