//! Haar coefficients of patterns: the pruned continuous transform, the
//! rasterizing discrete baseline and a slow direct-evaluation oracle.
//!
//! Coefficients are indexed by subband, level `j` and shifts `(kx, ky)`.
//! `hl` uses the wavelet along x and the scaling function along y, `lh` the
//! reverse, and `hh` the wavelet along both axes. The wavelet is positive on
//! the lower half of its support.

mod dht;
mod oracle;
mod pcht;

pub use dht::{dht_transform, dht_transform_into, rasterize, DhtError, DhtWorkspace, Raster, RasterMode};
pub use oracle::{cht_inner_product_oracle, Basis, OracleError, OracleGrid};
pub use pcht::{pcht_pattern, pcht_pattern_into, pcht_polygon, TransformStats};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::pattern::Tile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subband {
    Hl,
    Lh,
    Hh,
}

impl Subband {
    pub const ALL: [Subband; 3] = [Subband::Hl, Subband::Lh, Subband::Hh];

    pub fn as_str(&self) -> &'static str {
        match self {
            Subband::Hl => "hl",
            Subband::Lh => "lh",
            Subband::Hh => "hh",
        }
    }
}

impl fmt::Display for Subband {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subband {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hl" => Ok(Subband::Hl),
            "lh" => Ok(Subband::Lh),
            "hh" => Ok(Subband::Hh),
            other => Err(format!("unknown subband '{other}'")),
        }
    }
}

/// Position of a detail coefficient. The derived ordering sorts by level,
/// then subband, then `kx`, then `ky`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffIndex {
    pub level: u32,
    pub subband: Subband,
    pub kx: u32,
    pub ky: u32,
}

impl CoeffIndex {
    pub const fn new(subband: Subband, level: u32, kx: u32, ky: u32) -> Self {
        Self { level, subband, kx, ky }
    }
}

/// Receiver for detail coefficients as a transform produces them.
pub trait CoefficientSink {
    fn add_detail(&mut self, index: CoeffIndex, value: f64);
}

/// Folds coefficients into a running checksum and throws them away.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ChecksumSink {
    pub sum: f64,
    pub count: u64,
}

impl CoefficientSink for ChecksumSink {
    #[inline]
    fn add_detail(&mut self, _index: CoeffIndex, value: f64) {
        self.sum += value;
        self.count += 1;
    }
}

/// Sparse coefficient store: the dc term plus every nonzero detail.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    tile: Tile,
    dc: f64,
    details: HashMap<CoeffIndex, f64>,
}

/// One disagreement between two coefficient sets. `index` is `None` for dc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mismatch {
    pub index: Option<CoeffIndex>,
    pub left: f64,
    pub right: f64,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            None => write!(f, "dc: {} vs {}", self.left, self.right),
            Some(i) => write!(
                f,
                "{},{},{},{}: {} vs {}",
                i.subband, i.level, i.kx, i.ky, self.left, self.right
            ),
        }
    }
}

impl CoefficientSet {
    pub fn new(tile: Tile) -> Self {
        Self {
            tile,
            dc: 0.0,
            details: HashMap::new(),
        }
    }

    pub fn tile(&self) -> Tile {
        self.tile
    }

    pub fn dc(&self) -> f64 {
        self.dc
    }

    pub fn set_dc(&mut self, dc: f64) {
        self.dc = dc;
    }

    /// Detail value, zero when not stored.
    pub fn get(&self, index: CoeffIndex) -> f64 {
        self.details.get(&index).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, index: CoeffIndex) -> bool {
        self.details.contains_key(&index)
    }

    /// Number of stored details.
    pub fn len(&self) -> usize {
        self.details.len()
    }

    pub fn is_empty(&self) -> bool {
        self.details.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CoeffIndex, f64)> + '_ {
        self.details.iter().map(|(&k, &v)| (k, v))
    }

    /// Details in output order.
    pub fn sorted(&self) -> Vec<(CoeffIndex, f64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by_key(|&(k, _)| k);
        v
    }

    /// Inserts or overwrites a detail; zero removes it.
    pub fn insert(&mut self, index: CoeffIndex, value: f64) {
        if value == 0.0 {
            self.details.remove(&index);
        } else {
            self.details.insert(index, value);
        }
    }

    /// Drops details that cancelled to exactly zero.
    pub fn purge_zeros(&mut self) {
        self.details.retain(|_, v| *v != 0.0);
    }

    /// `dc^2 + Σ detail^2`.
    pub fn energy(&self) -> f64 {
        self.dc * self.dc + self.details.values().map(|v| v * v).sum::<f64>()
    }

    /// Largest absolute difference over dc and the union of stored details.
    pub fn max_abs_diff(&self, other: &CoefficientSet) -> f64 {
        self.union_keys(other)
            .map(|k| (self.get(k) - other.get(k)).abs())
            .fold((self.dc - other.dc).abs(), f64::max)
    }

    /// Coefficients differing by more than `tol`, in output order.
    pub fn mismatches(&self, other: &CoefficientSet, tol: f64) -> Vec<Mismatch> {
        let mut out = Vec::new();
        if (self.dc - other.dc).abs() > tol {
            out.push(Mismatch { index: None, left: self.dc, right: other.dc });
        }
        let mut keys: Vec<_> = self.union_keys(other).collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            let (l, r) = (self.get(k), other.get(k));
            if (l - r).abs() > tol {
                out.push(Mismatch { index: Some(k), left: l, right: r });
            }
        }
        out
    }

    fn union_keys<'a>(&'a self, other: &'a CoefficientSet) -> impl Iterator<Item = CoeffIndex> + 'a {
        self.details.keys().chain(other.details.keys()).copied()
    }
}

impl CoefficientSink for CoefficientSet {
    #[inline]
    fn add_detail(&mut self, index: CoeffIndex, value: f64) {
        *self.details.entry(index).or_insert(0.0) += value;
    }
}

/// Raw butterfly outputs before scaling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Butterfly {
    pub hl: f64,
    pub lh: f64,
    pub hh: f64,
    pub sum: f64,
}

/// Combines the scaling inner products of the four children of a cell.
/// `x`, `y` are the lower row along +x, `z`, `t` the upper row.
#[inline]
pub(crate) fn butterfly(x: f64, y: f64, z: f64, t: f64) -> Butterfly {
    let a = x - y;
    let b = x + y;
    let c = z - t;
    let d = z + t;
    Butterfly {
        hl: a + c,
        lh: b - d,
        hh: a - c,
        sum: b + d,
    }
}

#[inline]
pub(crate) fn emit<S: CoefficientSink>(sink: &mut S, level: u32, kx: u32, ky: u32, scale: f64, bf: &Butterfly) {
    sink.add_detail(CoeffIndex::new(Subband::Hl, level, kx, ky), scale * bf.hl);
    sink.add_detail(CoeffIndex::new(Subband::Lh, level, kx, ky), scale * bf.lh);
    sink.add_detail(CoeffIndex::new(Subband::Hh, level, kx, ky), scale * bf.hh);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn butterfly_signs() {
        // Only the lower-left child: positive in every subband.
        let bf = butterfly(1.0, 0.0, 0.0, 0.0);
        assert_eq!(bf, Butterfly { hl: 1.0, lh: 1.0, hh: 1.0, sum: 1.0 });
        let bf = butterfly(0.0, 0.0, 0.0, 1.0);
        assert_eq!(bf, Butterfly { hl: -1.0, lh: -1.0, hh: 1.0, sum: 1.0 });
        let bf = butterfly(0.0, 2.0, 0.0, 0.0);
        assert_eq!(bf, Butterfly { hl: -2.0, lh: 2.0, hh: -2.0, sum: 2.0 });
    }

    #[test]
    fn index_order_is_level_then_subband() {
        let mut v = [
            CoeffIndex::new(Subband::Hl, 1, 0, 0),
            CoeffIndex::new(Subband::Hh, 0, 0, 0),
            CoeffIndex::new(Subband::Hl, 0, 0, 0),
            CoeffIndex::new(Subband::Lh, 0, 0, 0),
            CoeffIndex::new(Subband::Hl, 1, 0, 1),
            CoeffIndex::new(Subband::Hl, 1, 1, 0),
        ];
        v.sort();
        let names: Vec<_> = v
            .iter()
            .map(|i| format!("{}{}{}{}", i.subband, i.level, i.kx, i.ky))
            .collect();
        assert_eq!(names, ["hl000", "lh000", "hh000", "hl100", "hl101", "hl110"]);
    }

    #[test]
    fn set_bookkeeping() {
        let tile = Tile::new(2, 2, 1).unwrap();
        let mut a = CoefficientSet::new(tile);
        let i = CoeffIndex::new(Subband::Hl, 0, 0, 0);
        a.add_detail(i, 0.5);
        a.add_detail(i, -0.5);
        a.purge_zeros();
        assert!(a.is_empty());
        a.insert(i, 0.25);
        let mut b = CoefficientSet::new(tile);
        b.set_dc(1.0);
        assert_eq!(a.max_abs_diff(&b), 1.0);
        let m = a.mismatches(&b, 0.1);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].index, None);
        assert_eq!(m[1].to_string(), "hl,0,0,0: 0.25 vs 0");
    }
}
