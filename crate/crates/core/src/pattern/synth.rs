//! Deterministic synthetic layout tiles.
//!
//! `contact-array` models a contact layer: equal squares on a regular grid,
//! each jittered inside its own grid slot. `random-rectilinear` models metal
//! layers: outlines of 1 to 4 overlapping rectangles, placed by rejection
//! sampling until pairwise disjoint.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Item, Pattern, Tile};
use crate::geometry::{Clipper, IPoint, IRect, Polygon};

/// Side of a contact square, in tile units.
pub const CONTACT_SIDE: i64 = 16;
/// Side range of the rectangles that make up a random rectilinear polygon.
pub const RECT_MIN_SIDE: i64 = 4;
pub const RECT_MAX_SIDE: i64 = 48;
/// Rectangles per random rectilinear polygon, inclusive bounds.
pub const RECTS_PER_POLYGON: (usize, usize) = (1, 4);
/// Rejection-sampling budget per polygon.
pub const MAX_ATTEMPTS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SyntheticKind {
    ContactArray,
    RandomRectilinear,
}

impl SyntheticKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SyntheticKind::ContactArray => "contact-array",
            SyntheticKind::RandomRectilinear => "random-rectilinear",
        }
    }
}

impl fmt::Display for SyntheticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SyntheticKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "contact-array" => Ok(SyntheticKind::ContactArray),
            "random-rectilinear" => Ok(SyntheticKind::RandomRectilinear),
            other => Err(format!(
                "unknown pattern kind '{other}' (expected contact-array or random-rectilinear)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("could not place polygon {placed} after {attempts} attempts")]
    PlacementFailure { placed: usize, attempts: usize },
}

/// Generates `count` unit-weight polygons on `tile`, deterministically in
/// `seed`.
pub fn generate_synthetic(
    kind: SyntheticKind,
    tile: Tile,
    count: usize,
    seed: u64,
) -> Result<Pattern, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polygons = match kind {
        SyntheticKind::ContactArray => contact_array(&mut rng, tile, count)?,
        SyntheticKind::RandomRectilinear => random_rectilinear(&mut rng, tile, count)?,
    };
    Ok(Pattern::new(
        tile,
        polygons.into_iter().map(|p| Item::new(p, 1.0)).collect(),
    ))
}

fn contact_array(rng: &mut ChaCha8Rng, tile: Tile, count: usize) -> Result<Vec<Polygon>, GenerateError> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let grid = (count as f64).sqrt().ceil() as i64;
    let grid = if grid * grid < count as i64 { grid + 1 } else { grid };
    let slot_w = tile.width() as i64 / grid;
    let slot_h = tile.height() as i64 / grid;
    if slot_w < 2 || slot_h < 2 {
        return Err(GenerateError::PlacementFailure { placed: 0, attempts: 1 });
    }
    let side = CONTACT_SIDE.min(slot_w / 2).min(slot_h / 2).max(1);
    let mut slots: Vec<(i64, i64)> = (0..grid)
        .flat_map(|gy| (0..grid).map(move |gx| (gx, gy)))
        .collect();
    slots.shuffle(rng);
    slots.truncate(count);
    slots.sort_unstable_by_key(|&(gx, gy)| (gy, gx));
    Ok(slots
        .into_iter()
        .map(|(gx, gy)| {
            let x = gx * slot_w + rng.gen_range(0..=slot_w - side);
            let y = gy * slot_h + rng.gen_range(0..=slot_h - side);
            Polygon::rectangle(x, y, x + side, y + side).expect("contact square is non-degenerate")
        })
        .collect())
}

fn random_rectilinear(
    rng: &mut ChaCha8Rng,
    tile: Tile,
    count: usize,
) -> Result<Vec<Polygon>, GenerateError> {
    let tw = tile.width() as i64;
    let th = tile.height() as i64;
    let max_w = RECT_MAX_SIDE.min(tw / 2).max(1);
    let max_h = RECT_MAX_SIDE.min(th / 2).max(1);
    let min_w = RECT_MIN_SIDE.min(max_w);
    let min_h = RECT_MIN_SIDE.min(max_h);

    let mut clipper = Clipper::new();
    let mut placed: Vec<Polygon> = Vec::with_capacity(count);
    for index in 0..count {
        let mut attempts = 0;
        let polygon = loop {
            if attempts == MAX_ATTEMPTS {
                return Err(GenerateError::PlacementFailure { placed: index, attempts });
            }
            attempts += 1;
            let n = rng.gen_range(RECTS_PER_POLYGON.0..=RECTS_PER_POLYGON.1);
            let mut rects: Vec<IRect> = Vec::with_capacity(n);
            for _ in 0..n {
                let w = rng.gen_range(min_w..=max_w);
                let h = rng.gen_range(min_h..=max_h);
                let r = match rects.as_slice() {
                    [] => IRect { x0: 0, y0: 0, x1: w, y1: h },
                    existing => {
                        // Positive-area overlap with an earlier rectangle
                        // keeps the union connected.
                        let base = existing[rng.gen_range(0..existing.len())];
                        let x0 = rng.gen_range(base.x0 - w + 1..base.x1);
                        let y0 = rng.gen_range(base.y0 - h + 1..base.y1);
                        IRect { x0, y0, x1: x0 + w, y1: y0 + h }
                    }
                };
                rects.push(r);
            }
            let min_x = rects.iter().map(|r| r.x0).min().unwrap_or(0);
            let min_y = rects.iter().map(|r| r.y0).min().unwrap_or(0);
            let span_x = rects.iter().map(|r| r.x1).max().unwrap_or(0) - min_x;
            let span_y = rects.iter().map(|r| r.y1).max().unwrap_or(0) - min_y;
            if span_x > tw || span_y > th {
                continue;
            }
            let dx = rng.gen_range(0..=tw - span_x) - min_x;
            let dy = rng.gen_range(0..=th - span_y) - min_y;
            for r in rects.iter_mut() {
                *r = IRect { x0: r.x0 + dx, y0: r.y0 + dy, x1: r.x1 + dx, y1: r.y1 + dy };
            }
            let Some(outline) = union_outline(&rects) else {
                continue;
            };
            let clear = placed.iter().all(|other| {
                rects.iter().all(|r| clipper.doubled_area_exact(other, r) == Some(0))
            });
            if clear {
                break outline;
            }
        };
        placed.push(polygon);
    }
    Ok(placed)
}

/// Outline of a union of rectangles as a single simple rectilinear polygon.
///
/// Returns `None` when the union has a hole, is disconnected, or pinches at a
/// vertex, since none of those is a simple polygon.
pub(crate) fn union_outline(rects: &[IRect]) -> Option<Polygon> {
    let mut xs: Vec<i64> = rects.iter().flat_map(|r| [r.x0, r.x1]).collect();
    let mut ys: Vec<i64> = rects.iter().flat_map(|r| [r.y0, r.y1]).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    let (nx, ny) = (xs.len() - 1, ys.len() - 1);
    let mut covered = vec![false; nx * ny];
    for r in rects {
        let i0 = xs.binary_search(&r.x0).ok()?;
        let i1 = xs.binary_search(&r.x1).ok()?;
        let j0 = ys.binary_search(&r.y0).ok()?;
        let j1 = ys.binary_search(&r.y1).ok()?;
        for j in j0..j1 {
            for i in i0..i1 {
                covered[j * nx + i] = true;
            }
        }
    }
    let at = |i: isize, j: isize| {
        i >= 0 && j >= 0 && (i as usize) < nx && (j as usize) < ny && covered[j as usize * nx + i as usize]
    };
    // Clockwise with y up: left sides go up, top sides go right, right sides
    // go down, bottom sides go left.
    let mut next: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut add = |from: (usize, usize), to: (usize, usize)| next.insert(from, to).is_none();
    for j in 0..ny {
        for i in 0..nx {
            if !covered[j * nx + i] {
                continue;
            }
            let (si, sj) = (i as isize, j as isize);
            let ok = (at(si - 1, sj) || add((i, j), (i, j + 1)))
                && (at(si, sj + 1) || add((i, j + 1), (i + 1, j + 1)))
                && (at(si + 1, sj) || add((i + 1, j + 1), (i + 1, j)))
                && (at(si, sj - 1) || add((i + 1, j), (i, j)));
            if !ok {
                return None;
            }
        }
    }
    let start = *next.keys().min()?;
    let mut ring = Vec::with_capacity(next.len());
    let mut cur = start;
    loop {
        ring.push(IPoint::new(xs[cur.0], ys[cur.1]));
        cur = *next.get(&cur)?;
        if cur == start {
            break;
        }
        if ring.len() > next.len() {
            return None;
        }
    }
    if ring.len() != next.len() {
        return None;
    }
    let poly = Polygon::from_ipoints(ring).ok()?;
    poly.is_simple().then_some(poly)
}
