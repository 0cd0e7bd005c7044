//! Slow reference for Haar coefficients by direct evaluation of the inner
//! products on a fine grid.
//!
//! The pattern is reduced to the exact mass `Σ w_i · area(P_i ∩ cell)` of each
//! grid cell. Each basis function is constant on every cell of a grid at
//! least as fine as `2^(j+1)` per axis, so summing mass times basis value
//! over the support is exact. Nothing here goes through the butterfly.

use thiserror::Error;

use super::{CoeffIndex, CoefficientSet, Subband};
use crate::geometry::{Clipper, Rect};
use crate::pattern::{Pattern, Tile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Dc,
    Detail(CoeffIndex),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("resolution {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("resolution {resolution} cannot resolve level {level} (needs at least {needed})")]
    ResolutionTooCoarse { resolution: usize, level: u32, needed: usize },
    #[error("coefficient index {0:?} is outside the tile's transform")]
    IndexOutOfRange(CoeffIndex),
}

/// Per-cell mass of a pattern on a `resolution x resolution` grid.
#[derive(Clone, Debug)]
pub struct OracleGrid {
    tile: Tile,
    resolution: usize,
    mass: Vec<f64>,
}

impl OracleGrid {
    /// `resolution` must be a power of two no smaller than `2^J`.
    pub fn new(pattern: &Pattern, resolution: usize) -> Result<Self, OracleError> {
        let tile = pattern.tile();
        if !resolution.is_power_of_two() {
            return Err(OracleError::NotPowerOfTwo(resolution));
        }
        let needed = 1usize << tile.depth();
        if resolution < needed {
            return Err(OracleError::ResolutionTooCoarse {
                resolution,
                level: tile.depth().saturating_sub(1),
                needed,
            });
        }
        let cw = tile.width() as f64 / resolution as f64;
        let ch = tile.height() as f64 / resolution as f64;
        let mut mass = vec![0.0; resolution * resolution];
        let mut clipper = Clipper::new();
        let clamp = |v: f64| (v.max(0.0) as usize).min(resolution);
        for item in pattern.items() {
            let bb = item.polygon.bbox();
            let (ix0, ix1) = (clamp((bb.x0 / cw).floor()), clamp((bb.x1 / cw).ceil()));
            let (iy0, iy1) = (clamp((bb.y0 / ch).floor()), clamp((bb.y1 / ch).ceil()));
            for iy in iy0..iy1 {
                for ix in ix0..ix1 {
                    let cell = Rect {
                        x0: ix as f64 * cw,
                        y0: iy as f64 * ch,
                        x1: (ix + 1) as f64 * cw,
                        y1: (iy + 1) as f64 * ch,
                    };
                    mass[iy * resolution + ix] +=
                        item.weight * clipper.intersection_area(&item.polygon, &cell);
                }
            }
        }
        Ok(Self { tile, resolution, mass })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// `⟨f, basis⟩`.
    pub fn inner_product(&self, basis: Basis) -> Result<f64, OracleError> {
        let s0 = self.tile.root_scale();
        let idx = match basis {
            Basis::Dc => return Ok(s0 * self.mass.iter().sum::<f64>()),
            Basis::Detail(idx) => idx,
        };
        let span = 1u64 << idx.level;
        if idx.level >= self.tile.depth() || idx.kx as u64 >= span || idx.ky as u64 >= span {
            return Err(OracleError::IndexOutOfRange(idx));
        }
        let support = self.resolution >> idx.level;
        if support < 2 {
            return Err(OracleError::ResolutionTooCoarse {
                resolution: self.resolution,
                level: idx.level,
                needed: 2usize << idx.level,
            });
        }
        let half = support / 2;
        let (ox, oy) = (idx.kx as usize * support, idx.ky as usize * support);
        let mut sum = 0.0;
        for dy in 0..support {
            let row = (oy + dy) * self.resolution + ox;
            let sy = if dy < half { 1.0 } else { -1.0 };
            for dx in 0..support {
                let sx = if dx < half { 1.0 } else { -1.0 };
                let sign = match idx.subband {
                    Subband::Hl => sx,
                    Subband::Lh => sy,
                    Subband::Hh => sx * sy,
                };
                sum += sign * self.mass[row + dx];
            }
        }
        let amplitude = s0 * span as f64;
        Ok(amplitude * sum)
    }

    /// Every coefficient of the tile's transform, evaluated one by one.
    pub fn coefficients(&self) -> CoefficientSet {
        let mut set = CoefficientSet::new(self.tile);
        set.set_dc(self.inner_product(Basis::Dc).expect("dc is always defined"));
        for level in 0..self.tile.depth() {
            let span = 1u32 << level;
            for subband in Subband::ALL {
                for ky in 0..span {
                    for kx in 0..span {
                        let idx = CoeffIndex::new(subband, level, kx, ky);
                        let v = self
                            .inner_product(Basis::Detail(idx))
                            .expect("index in range at an admissible resolution");
                        set.insert(idx, v);
                    }
                }
            }
        }
        set
    }
}

/// One inner product `⟨f, basis⟩` evaluated on a `resolution` grid.
pub fn cht_inner_product_oracle(
    pattern: &Pattern,
    basis: Basis,
    resolution: usize,
) -> Result<f64, OracleError> {
    OracleGrid::new(pattern, resolution)?.inner_product(basis)
}
