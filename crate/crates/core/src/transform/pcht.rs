//! Pruned continuous Haar transform.
//!
//! Each polygon is transformed on its own by a depth-first walk of the dyadic
//! cells of the tile. At every cell the intersection area with the polygon is
//! computed; an empty or fully covered cell has no detail coefficients below
//! it, so the walk stops there and returns the area. Otherwise the four
//! children are visited and combined with the Haar butterfly. Contributions
//! of all polygons are accumulated into one sink in input order.

use std::ops::AddAssign;

use super::{butterfly, emit, CoefficientSet, CoefficientSink};
use crate::geometry::{Clipper, Polygon, Rect};
use crate::pattern::{Pattern, Tile};

/// Relative tolerance for the full-cell test on the real path.
const FULL_CELL_RTOL: f64 = 1e-9;

/// Work counters for one transform.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransformStats {
    /// Recursion entries.
    pub nodes_visited: u64,
    /// Intersection-area evaluations; one per entry.
    pub area_calls: u64,
    /// Walks stopped at a fully covered cell.
    pub pruned_full: u64,
    /// Walks stopped at a cell the polygon misses.
    pub pruned_empty: u64,
    /// Walks stopped at the maximum depth on a partially covered cell.
    pub leaf_terminations: u64,
}

impl AddAssign for TransformStats {
    fn add_assign(&mut self, rhs: Self) {
        self.nodes_visited += rhs.nodes_visited;
        self.area_calls += rhs.area_calls;
        self.pruned_full += rhs.pruned_full;
        self.pruned_empty += rhs.pruned_empty;
        self.leaf_terminations += rhs.leaf_terminations;
    }
}

struct Walker<'a, S> {
    tile: Tile,
    clipper: &'a mut Clipper,
    sink: &'a mut S,
    stats: &'a mut TransformStats,
}

impl<S: CoefficientSink> Walker<'_, S> {
    fn visit(&mut self, poly: &Polygon, level: u32, kx: u32, ky: u32, scale: f64) -> f64 {
        self.stats.nodes_visited += 1;
        self.stats.area_calls += 1;
        let cell = self.tile.cell(level, kx, ky);
        let (area, terminal) = match self.clipper.doubled_area_exact(poly, &cell) {
            Some(doubled) => {
                let area = (doubled / 2) as f64;
                if doubled == 0 {
                    (area, Some(&mut self.stats.pruned_empty))
                } else if doubled == 2 * cell.area() {
                    (area, Some(&mut self.stats.pruned_full))
                } else {
                    (area, None)
                }
            }
            None => {
                let rect = Rect::from(cell);
                let area = self.clipper.intersection_area(poly, &rect);
                let full = rect.area();
                if area == 0.0 {
                    (area, Some(&mut self.stats.pruned_empty))
                } else if (area - full).abs() <= FULL_CELL_RTOL * full {
                    (area, Some(&mut self.stats.pruned_full))
                } else {
                    (area, None)
                }
            }
        };
        if let Some(counter) = terminal {
            *counter += 1;
            return area;
        }
        if level == self.tile.depth() {
            self.stats.leaf_terminations += 1;
            return area;
        }
        let (cl, cx, cy, cs) = (level + 1, 2 * kx, 2 * ky, 2.0 * scale);
        let x = self.visit(poly, cl, cx, cy, cs);
        let y = self.visit(poly, cl, cx + 1, cy, cs);
        let z = self.visit(poly, cl, cx, cy + 1, cs);
        let t = self.visit(poly, cl, cx + 1, cy + 1, cs);
        let bf = butterfly(x, y, z, t);
        emit(self.sink, level, kx, ky, scale, &bf);
        bf.sum
    }
}

/// Transforms one polygon starting at cell `(level, kx, ky)`.
///
/// `scale` is the normalization of that cell's basis functions with the
/// polygon weight folded in; the root call uses `w / sqrt(Tx * Ty)`. Detail
/// coefficients are added to `sink`, counters to `stats`, and the raw
/// intersection area of the polygon with the starting cell is returned.
#[allow(clippy::too_many_arguments)]
pub fn pcht_polygon<S: CoefficientSink>(
    poly: &Polygon,
    tile: Tile,
    level: u32,
    kx: u32,
    ky: u32,
    scale: f64,
    sink: &mut S,
    stats: &mut TransformStats,
) -> f64 {
    let mut clipper = Clipper::new();
    Walker { tile, clipper: &mut clipper, sink, stats }.visit(poly, level, kx, ky, scale)
}

/// Transforms a whole pattern into `sink` and returns the dc coefficient.
pub fn pcht_pattern_into<S: CoefficientSink>(pattern: &Pattern, sink: &mut S) -> (f64, TransformStats) {
    let tile = pattern.tile();
    let s0 = tile.root_scale();
    let mut stats = TransformStats::default();
    let mut clipper = Clipper::new();
    let mut walker = Walker { tile, clipper: &mut clipper, sink, stats: &mut stats };
    let mut weighted_area = 0.0;
    for item in pattern.items() {
        let root = walker.visit(&item.polygon, 0, 0, 0, s0 * item.weight);
        weighted_area += item.weight * root;
    }
    (s0 * weighted_area, stats)
}

/// Full coefficient set of a validated pattern.
pub fn pcht_pattern(pattern: &Pattern) -> (CoefficientSet, TransformStats) {
    let mut set = CoefficientSet::new(pattern.tile());
    let (dc, stats) = pcht_pattern_into(pattern, &mut set);
    set.set_dc(dc);
    set.purge_zeros();
    (set, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::pattern::Item;
    use crate::transform::{Basis, CoeffIndex, OracleGrid, Subband};

    fn tile2() -> Tile {
        Tile::new(2, 2, 1).unwrap()
    }

    fn unit_square() -> Polygon {
        Polygon::rectangle(0, 0, 1, 1).unwrap()
    }

    #[test]
    fn whole_tile_prunes_at_root() {
        let poly = Polygon::rectangle(0, 0, 2, 2).unwrap();
        let mut set = CoefficientSet::new(tile2());
        let mut stats = TransformStats::default();
        let root = pcht_polygon(&poly, tile2(), 0, 0, 0, 0.5, &mut set, &mut stats);
        assert_eq!(root, 4.0);
        assert!(set.is_empty());
        assert_eq!(stats.nodes_visited, 1);
        assert_eq!(stats.pruned_full, 1);
        assert_eq!(0.5 * root, 2.0);
    }

    #[test]
    fn unit_square_in_small_tile() {
        let mut set = CoefficientSet::new(tile2());
        let mut stats = TransformStats::default();
        let root = pcht_polygon(&unit_square(), tile2(), 0, 0, 0, 0.5, &mut set, &mut stats);
        assert_eq!(root, 1.0);

        let pattern = Pattern::new(tile2(), vec![Item::new(unit_square(), 1.0)]);
        let oracle = OracleGrid::new(&pattern, 4).unwrap();
        for sb in Subband::ALL {
            let idx = CoeffIndex::new(sb, 0, 0, 0);
            let expected = oracle.inner_product(Basis::Detail(idx)).unwrap();
            assert_eq!(expected, 0.5);
            assert_eq!(set.get(idx), expected);
        }
        let (full, stats) = pcht_pattern(&pattern);
        assert_eq!(full.dc(), oracle.inner_product(Basis::Dc).unwrap());
        assert_eq!(full.dc(), 0.5);
        assert_eq!(full.len(), 3);
        assert_eq!(stats.nodes_visited, 5);
        assert_eq!(stats.area_calls, stats.nodes_visited);
    }

    #[test]
    fn disjoint_cell_returns_zero() {
        let tile = Tile::new(4, 4, 2).unwrap();
        let mut set = CoefficientSet::new(tile);
        let mut stats = TransformStats::default();
        let root = pcht_polygon(&unit_square(), tile, 1, 1, 1, 1.0, &mut set, &mut stats);
        assert_eq!(root, 0.0);
        assert!(set.is_empty());
        assert_eq!(stats.nodes_visited, 1);
        assert_eq!(stats.pruned_empty, 1);
    }

    #[test]
    fn empty_pattern() {
        let (set, stats) = pcht_pattern(&Pattern::empty(tile2()));
        assert_eq!(set.dc(), 0.0);
        assert!(set.is_empty());
        assert_eq!(stats, TransformStats::default());
    }

    #[test]
    fn linear_in_weights() {
        let a = Polygon::rectangle(0, 0, 1, 1).unwrap();
        let b = Polygon::rectangle(1, 1, 2, 2).unwrap();
        let both = Pattern::new(tile2(), vec![Item::new(a.clone(), 0.3), Item::new(b.clone(), 0.7)]);
        let (ta, _) = pcht_pattern(&Pattern::new(tile2(), vec![Item::new(a, 1.0)]));
        let (tb, _) = pcht_pattern(&Pattern::new(tile2(), vec![Item::new(b, 1.0)]));
        let (tab, _) = pcht_pattern(&both);
        assert!((tab.dc() - (0.3 * ta.dc() + 0.7 * tb.dc())).abs() < 1e-15);
        for sb in Subband::ALL {
            let i = CoeffIndex::new(sb, 0, 0, 0);
            assert!((tab.get(i) - (0.3 * ta.get(i) + 0.7 * tb.get(i))).abs() < 1e-15);
        }
        // Lower-left and upper-right children share the sign of hh.
        assert!(tab.get(CoeffIndex::new(Subband::Hh, 0, 0, 0)) > 0.0);
    }

    #[test]
    fn right_half_polygon_has_negative_hl() {
        let tile = Tile::new(4, 4, 2).unwrap();
        let poly = Polygon::rectangle(2, 1, 4, 3).unwrap();
        let (set, _) = pcht_pattern(&Pattern::new(tile, vec![Item::new(poly, 1.0)]));
        assert_eq!(set.get(CoeffIndex::new(Subband::Hl, 0, 0, 0)), -4.0 / 4.0);
    }

    #[test]
    fn real_path_triangle_matches_oracle() {
        let tile = Tile::new(8, 8, 3).unwrap();
        let tri = Polygon::new(vec![
            Point::new(0.5, 0.25),
            Point::new(3.0, 7.5),
            Point::new(7.25, 1.0),
        ])
        .unwrap();
        let pattern = Pattern::new(tile, vec![Item::new(tri, -1.5)]);
        let (set, stats) = pcht_pattern(&pattern);
        let oracle = OracleGrid::new(&pattern, 8).unwrap().coefficients();
        assert!(set.max_abs_diff(&oracle) < 1e-12, "{}", set.max_abs_diff(&oracle));
        assert!(stats.leaf_terminations > 0);
    }
}
