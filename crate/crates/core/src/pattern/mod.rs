//! Weighted polygonal patterns over a transform tile.
//!
//! A pattern is the piecewise-constant function `f = Σ w_i · 1[P_i]` where
//! the polygons have pairwise-disjoint interiors and all lie inside the tile
//! `[0, Tx) x [0, Ty)`.

mod synth;

pub use synth::{generate_synthetic, GenerateError, SyntheticKind, CONTACT_SIDE, MAX_ATTEMPTS};

use thiserror::Error;

use crate::geometry::{overlap_area, IRect, Polygon, PolygonKind, MAX_INT_COORD};

/// Deepest supported transform level.
pub const MAX_DEPTH: u32 = 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TileError {
    #[error("tile extents must be positive, got {0}x{1}")]
    ZeroExtent(u64, u64),
    #[error("tile extent {0} exceeds the supported coordinate range")]
    TooLarge(u64),
    #[error("depth {0} exceeds the maximum of {MAX_DEPTH}")]
    DepthTooLarge(u32),
    #[error("tile {width}x{height} is not divisible by 2^{depth}")]
    NotDivisible { width: u64, height: u64, depth: u32 },
}

/// Transform domain `[0, Tx) x [0, Ty)` with maximum depth `J`.
///
/// Both extents are divisible by `2^J`, so every dyadic cell down to level
/// `J` has integer corners.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tile {
    width: u64,
    height: u64,
    depth: u32,
}

impl Tile {
    pub fn new(width: u64, height: u64, depth: u32) -> Result<Self, TileError> {
        if width == 0 || height == 0 {
            return Err(TileError::ZeroExtent(width, height));
        }
        if let Some(&big) = [width, height].iter().find(|&&e| e > MAX_INT_COORD as u64) {
            return Err(TileError::TooLarge(big));
        }
        if depth > MAX_DEPTH {
            return Err(TileError::DepthTooLarge(depth));
        }
        let step = 1u64 << depth;
        if !width.is_multiple_of(step) || !height.is_multiple_of(step) {
            return Err(TileError::NotDivisible { width, height, depth });
        }
        Ok(Self { width, height, depth })
    }

    /// Deepest level the extents allow; `log2(min(Tx, Ty))` for power-of-two
    /// tiles.
    pub fn with_default_depth(width: u64, height: u64) -> Result<Self, TileError> {
        if width == 0 || height == 0 {
            return Err(TileError::ZeroExtent(width, height));
        }
        let depth = width.trailing_zeros().min(height.trailing_zeros()).min(MAX_DEPTH);
        Self::new(width, height, depth)
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn height(&self) -> u64 {
        self.height
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn with_depth(&self, depth: u32) -> Result<Self, TileError> {
        Self::new(self.width, self.height, depth)
    }

    pub fn rect(&self) -> IRect {
        IRect {
            x0: 0,
            y0: 0,
            x1: self.width as i64,
            y1: self.height as i64,
        }
    }

    pub fn area(&self) -> f64 {
        self.width as f64 * self.height as f64
    }

    /// Root normalization `1 / sqrt(Tx * Ty)`.
    pub fn root_scale(&self) -> f64 {
        1.0 / self.area().sqrt()
    }

    /// Width of a cell at `level`.
    pub fn cell_width(&self, level: u32) -> i64 {
        (self.width >> level) as i64
    }

    pub fn cell_height(&self, level: u32) -> i64 {
        (self.height >> level) as i64
    }

    /// Cell `T_{level,kx,ky}`. Requires `level <= depth`.
    pub fn cell(&self, level: u32, kx: u32, ky: u32) -> IRect {
        let (w, h) = (self.cell_width(level), self.cell_height(level));
        let (x0, y0) = (kx as i64 * w, ky as i64 * h);
        IRect { x0, y0, x1: x0 + w, y1: y0 + h }
    }

    /// Number of nodes in the full quadtree down to the leaves at `depth`,
    /// `(4^(J+1) - 1) / 3`.
    pub fn dense_node_count(&self) -> u64 {
        ((1u128 << (2 * (self.depth as u128 + 1))) / 3) as u64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub polygon: Polygon,
    pub weight: f64,
}

impl Item {
    pub fn new(polygon: Polygon, weight: f64) -> Self {
        Self { polygon, weight }
    }
}

/// Why a pattern failed validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("OutOfTile({0})")]
    OutOfTile(usize),
    #[error("Overlap({0},{1},{2})")]
    Overlap(usize, usize, f64),
    #[error("NonSimple({0})")]
    NonSimple(usize),
    #[error("NonFiniteWeight({0})")]
    NonFiniteWeight(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pattern {
    tile: Tile,
    items: Vec<Item>,
}

impl Pattern {
    /// Builds a pattern without checking it; see [`Pattern::validate`].
    pub fn new(tile: Tile, items: Vec<Item>) -> Self {
        Self { tile, items }
    }

    pub fn empty(tile: Tile) -> Self {
        Self::new(tile, Vec::new())
    }

    pub fn tile(&self) -> Tile {
        self.tile
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn push(&mut self, polygon: Polygon, weight: f64) {
        self.items.push(Item::new(polygon, weight));
    }

    /// Polygon count `M`.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Total vertex count `K` over all polygons.
    pub fn vertex_count(&self) -> usize {
        self.items.iter().map(|it| it.polygon.len()).sum()
    }

    /// Same polygons on a tile with a different depth.
    pub fn with_depth(&self, depth: u32) -> Result<Self, TileError> {
        Ok(Self {
            tile: self.tile.with_depth(depth)?,
            items: self.items.clone(),
        })
    }

    /// Single-polygon sub-pattern for item `i`, keeping its weight.
    pub fn single(&self, i: usize) -> Self {
        Self::new(self.tile, vec![self.items[i].clone()])
    }

    pub fn validate(&self) -> Result<(), Violation> {
        validate(self)
    }
}

/// Checks that the polygons are simple, lie in the tile and have pairwise
/// disjoint interiors. Overlap is exact when both polygons are
/// rectilinear-integer and uses a `1e-9 * min(area)` threshold otherwise.
pub fn validate(pattern: &Pattern) -> Result<(), Violation> {
    for (i, item) in pattern.items.iter().enumerate() {
        check_item(&pattern.tile, i, item)?;
    }
    let mut order: Vec<usize> = (0..pattern.items.len()).collect();
    let bbox = |i: usize| pattern.items[i].polygon.bbox();
    order.sort_by(|&a, &b| bbox(a).x0.total_cmp(&bbox(b).x0).then(a.cmp(&b)));
    let mut overlaps = Vec::new();
    for (n, &i) in order.iter().enumerate() {
        let bi = bbox(i);
        for &k in &order[n + 1..] {
            let bk = bbox(k);
            if bk.x0 >= bi.x1 {
                break;
            }
            if bi.is_disjoint(&bk) {
                continue;
            }
            let (p, q) = (&pattern.items[i].polygon, &pattern.items[k].polygon);
            let area = overlap_area(p, q);
            let exact = p.kind() == PolygonKind::RectilinearInteger
                && q.kind() == PolygonKind::RectilinearInteger;
            let overlapping = if exact {
                area > 0.0
            } else {
                area >= 1e-9 * p.area().min(q.area())
            };
            if overlapping {
                overlaps.push((i.min(k), i.max(k), area));
            }
        }
    }
    match overlaps.into_iter().min_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1))) {
        Some((i, k, area)) => Err(Violation::Overlap(i, k, area)),
        None => Ok(()),
    }
}

/// Per-polygon checks that do not involve other polygons.
pub fn check_item(tile: &Tile, index: usize, item: &Item) -> Result<(), Violation> {
    if !item.weight.is_finite() {
        return Err(Violation::NonFiniteWeight(index));
    }
    if !item.polygon.is_simple() {
        return Err(Violation::NonSimple(index));
    }
    let bb = item.polygon.bbox();
    if bb.x0 < 0.0 || bb.y0 < 0.0 || bb.x1 > tile.width() as f64 || bb.y1 > tile.height() as f64 {
        return Err(Violation::OutOfTile(index));
    }
    Ok(())
}

/// `Σ w_i^2 · area(P_i)`, the squared L2 norm of a valid pattern.
pub fn pattern_energy(pattern: &Pattern) -> f64 {
    pattern
        .items
        .iter()
        .map(|it| it.weight * it.weight * it.polygon.area())
        .sum()
}
