//! Discrete Haar transform baseline: sample the pattern on the depth-`J`
//! grid, then run the complete butterfly tree bottom-up.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{butterfly, emit, CoefficientSet, CoefficientSink};
use crate::geometry::{Clipper, Rect};
use crate::pattern::{Pattern, Tile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RasterMode {
    /// Cell value is the weight of the polygon containing the cell center.
    BinarySample,
    /// Cell value is the mean of the pattern over the cell.
    ExactCoverage,
}

impl RasterMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RasterMode::BinarySample => "binary-sample",
            RasterMode::ExactCoverage => "exact-coverage",
        }
    }
}

impl fmt::Display for RasterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RasterMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "binary-sample" => Ok(RasterMode::BinarySample),
            "exact-coverage" => Ok(RasterMode::ExactCoverage),
            other => Err(format!(
                "unknown raster mode '{other}' (expected binary-sample or exact-coverage)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DhtError {
    #[error("raster is {side}x{side} but the tile needs {expected}x{expected}")]
    SideMismatch { side: usize, expected: usize },
    #[error("raster cells are {got:?} but the tile needs {expected:?}")]
    CellMismatch { got: (u64, u64), expected: (u64, u64) },
    #[error("pattern tile {got:?} differs from the workspace tile {expected:?}")]
    TileMismatch { got: Tile, expected: Tile },
}

/// Dense `n x n` grid of cell values, `n = 2^J`.
///
/// Cell `(ix, iy)` covers `[ix*cx, (ix+1)*cx) x [iy*cy, (iy+1)*cy)` and is
/// stored at `iy * n + ix`.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    side: usize,
    cell_width: u64,
    cell_height: u64,
    cells: Vec<f64>,
}

impl Raster {
    /// All-zero raster at the tile's depth.
    pub fn zeros(tile: Tile) -> Self {
        let side = 1usize << tile.depth();
        Self {
            side,
            cell_width: tile.width() >> tile.depth(),
            cell_height: tile.height() >> tile.depth(),
            cells: vec![0.0; side * side],
        }
    }

    pub fn from_cells(side: usize, cell_width: u64, cell_height: u64, cells: Vec<f64>) -> Self {
        assert_eq!(cells.len(), side * side, "cell count must be side^2");
        Self { side, cell_width, cell_height, cells }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cell_width(&self) -> u64 {
        self.cell_width
    }

    pub fn cell_height(&self) -> u64 {
        self.cell_height
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.cells[iy * self.side + ix]
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }
}

/// Samples a pattern on the tile's depth-`J` grid.
pub fn rasterize(pattern: &Pattern, mode: RasterMode) -> Raster {
    let mut raster = Raster::zeros(pattern.tile());
    fill(&mut raster, pattern, mode);
    raster
}

fn fill(raster: &mut Raster, pattern: &Pattern, mode: RasterMode) {
    match mode {
        RasterMode::BinarySample => fill_centers(raster, pattern),
        RasterMode::ExactCoverage => fill_coverage(raster, pattern),
    }
}

/// Scanline fill: along each row of cell centers, the polygon interior is
/// the union of `[x_1, x_2), [x_3, x_4), ...` over the sorted edge crossings.
fn fill_centers(raster: &mut Raster, pattern: &Pattern) {
    let n = raster.side;
    let (cx, cy) = (raster.cell_width as f64, raster.cell_height as f64);
    let first_center = |lo: f64, step: f64| ((lo / step - 0.5).ceil().max(0.0) as usize).min(n);
    let mut crossings: Vec<f64> = Vec::new();
    for item in pattern.items() {
        let pts = item.polygon.points();
        let bb = item.polygon.bbox();
        let (row0, row1) = (first_center(bb.y0, cy), first_center(bb.y1, cy));
        for iy in row0..row1 {
            let yc = (iy as f64 + 0.5) * cy;
            crossings.clear();
            let mut prev = pts[pts.len() - 1];
            for &p in &pts {
                if (p.y > yc) != (prev.y > yc) {
                    crossings.push(p.x + (yc - p.y) * (prev.x - p.x) / (prev.y - p.y));
                }
                prev = p;
            }
            crossings.sort_by(f64::total_cmp);
            let row = &mut raster.cells[iy * n..(iy + 1) * n];
            for span in crossings.chunks_exact(2) {
                let (c0, c1) = (first_center(span[0], cx), first_center(span[1], cx));
                for v in &mut row[c0..c1] {
                    *v += item.weight;
                }
            }
        }
    }
}

fn fill_coverage(raster: &mut Raster, pattern: &Pattern) {
    let n = raster.side;
    let (cw, ch) = (raster.cell_width as i64, raster.cell_height as i64);
    let cell_area = (cw * ch) as f64;
    let mut clipper = Clipper::new();
    for item in pattern.items() {
        let bb = item.polygon.bbox();
        let ix0 = ((bb.x0 / cw as f64).floor().max(0.0) as usize).min(n);
        let ix1 = ((bb.x1 / cw as f64).ceil().max(0.0) as usize).min(n);
        let iy0 = ((bb.y0 / ch as f64).floor().max(0.0) as usize).min(n);
        let iy1 = ((bb.y1 / ch as f64).ceil().max(0.0) as usize).min(n);
        for iy in iy0..iy1 {
            for ix in ix0..ix1 {
                let (x0, y0) = (ix as i64 * cw, iy as i64 * ch);
                let cell = Rect::from(crate::geometry::IRect { x0, y0, x1: x0 + cw, y1: y0 + ch });
                let area = clipper.intersection_area(&item.polygon, &cell);
                if area != 0.0 {
                    raster.cells[iy * n + ix] += item.weight * area / cell_area;
                }
            }
        }
    }
}

/// Runs every butterfly of the tree, emitting all `3 (4^J - 1) / 3` details
/// (zeros included) into `sink`. Returns the dc coefficient and the number
/// of butterfly nodes evaluated.
pub fn dht_transform_into<S: CoefficientSink>(
    raster: &Raster,
    tile: Tile,
    sink: &mut S,
) -> Result<(f64, u64), DhtError> {
    let depth = tile.depth();
    let expected = 1usize << depth;
    if raster.side != expected {
        return Err(DhtError::SideMismatch { side: raster.side, expected });
    }
    let cell = (tile.width() >> depth, tile.height() >> depth);
    if (raster.cell_width, raster.cell_height) != cell {
        return Err(DhtError::CellMismatch {
            got: (raster.cell_width, raster.cell_height),
            expected: cell,
        });
    }
    let mut buf = Vec::new();
    Ok(butterflies(raster, tile, &mut buf, sink))
}

fn butterflies<S: CoefficientSink>(raster: &Raster, tile: Tile, buf: &mut Vec<f64>, sink: &mut S) -> (f64, u64) {
    let depth = tile.depth();
    let cell_area = (raster.cell_width * raster.cell_height) as f64;
    buf.clear();
    buf.extend(raster.cells.iter().map(|v| v * cell_area));
    let s0 = tile.root_scale();
    let mut nodes = 0u64;
    // Level j reads the (2m x 2m) grid of level j+1 and writes its (m x m)
    // grid in place: output index ky*m+kx never passes an unread input.
    for level in (0..depth).rev() {
        let m = 1usize << level;
        let w = 2 * m;
        let scale = s0 * (1u64 << level) as f64;
        for ky in 0..m {
            let lower = 2 * ky * w;
            let upper = lower + w;
            for kx in 0..m {
                let bf = butterfly(
                    buf[lower + 2 * kx],
                    buf[lower + 2 * kx + 1],
                    buf[upper + 2 * kx],
                    buf[upper + 2 * kx + 1],
                );
                emit(sink, level, kx as u32, ky as u32, scale, &bf);
                buf[ky * m + kx] = bf.sum;
            }
        }
        nodes += (m * m) as u64;
    }
    (s0 * buf[0], nodes)
}

/// Raster and butterfly buffers kept across repeated transforms of
/// patterns on one tile, so steady-state runs allocate nothing.
#[derive(Clone, Debug)]
pub struct DhtWorkspace {
    tile: Tile,
    raster: Raster,
    buf: Vec<f64>,
}

impl DhtWorkspace {
    pub fn new(tile: Tile) -> Self {
        let raster = Raster::zeros(tile);
        let buf = Vec::with_capacity(raster.cells.len());
        Self { tile, raster, buf }
    }

    pub fn tile(&self) -> Tile {
        self.tile
    }

    /// The raster of the last transform.
    pub fn raster(&self) -> &Raster {
        &self.raster
    }

    /// Rasterizes `pattern` and runs the dense transform into `sink`, like
    /// `rasterize` followed by `dht_transform_into`.
    pub fn transform_into<S: CoefficientSink>(
        &mut self,
        pattern: &Pattern,
        mode: RasterMode,
        sink: &mut S,
    ) -> Result<(f64, u64), DhtError> {
        if pattern.tile() != self.tile {
            return Err(DhtError::TileMismatch { got: pattern.tile(), expected: self.tile });
        }
        self.raster.cells.fill(0.0);
        fill(&mut self.raster, pattern, mode);
        Ok(butterflies(&self.raster, self.tile, &mut self.buf, sink))
    }
}

/// Dense transform of a raster, sparsified only at the end.
pub fn dht_transform(raster: &Raster, tile: Tile) -> Result<CoefficientSet, DhtError> {
    let mut set = CoefficientSet::new(tile);
    let (dc, _) = dht_transform_into(raster, tile, &mut set)?;
    set.set_dc(dc);
    set.purge_zeros();
    Ok(set)
}
