mod common;

use common::{rectilinear_pattern, triangle_pattern};
use polyhaar::geometry::intersection_area;
use polyhaar::pattern::{pattern_energy, Item};
use polyhaar::transform::{
    dht_transform, pcht_pattern, pcht_polygon, rasterize, Basis, CoeffIndex, CoefficientSet, OracleGrid,
    RasterMode, Subband, TransformStats,
};
use polyhaar::{Pattern, Rect, Tile};
use proptest::prelude::*;

fn tile(size: u64, depth: u32) -> Tile {
    Tile::new(size, size, depth).unwrap()
}

fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(1e-300)
}

fn scaled_sum(parts: &[(f64, CoefficientSet)], t: Tile) -> CoefficientSet {
    let mut out = CoefficientSet::new(t);
    let mut dc = 0.0;
    for (w, cs) in parts {
        dc += w * cs.dc();
        for (k, v) in cs.iter() {
            out.insert(k, out.get(k) + w * v);
        }
    }
    out.set_dc(dc);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_oracle_on_rectilinear_patterns(seed in any::<u64>()) {
        let p = rectilinear_pattern(tile(64, 6), seed);
        let (cs, _) = pcht_pattern(&p);
        let oracle = OracleGrid::new(&p, 64).unwrap().coefficients();
        prop_assert!(cs.max_abs_diff(&oracle) <= 1e-9);
        for (k, _) in cs.iter() {
            prop_assert!(oracle.contains(k), "{:?} stored but oracle is zero", k);
        }
    }

    #[test]
    fn matches_oracle_on_triangles(seed in any::<u64>(), depth in 1u32..5) {
        let p = triangle_pattern(tile(64, depth), seed);
        let (cs, _) = pcht_pattern(&p);
        let oracle = OracleGrid::new(&p, 1 << depth).unwrap().coefficients();
        prop_assert!(cs.max_abs_diff(&oracle) <= 1e-9, "{}", cs.max_abs_diff(&oracle));
    }

    #[test]
    fn parseval_at_full_depth(seed in any::<u64>()) {
        let p = rectilinear_pattern(tile(64, 6), seed);
        let (cs, _) = pcht_pattern(&p);
        prop_assert!(rel_close(cs.energy(), pattern_energy(&p), 1e-9));
        let dht = dht_transform(&rasterize(&p, RasterMode::ExactCoverage), p.tile()).unwrap();
        prop_assert!(rel_close(dht.energy(), pattern_energy(&p), 1e-9));
    }

    #[test]
    fn linear_in_the_items(seed in any::<u64>(), triangles: bool) {
        let t = tile(64, 4);
        let p = if triangles { triangle_pattern(t, seed) } else { rectilinear_pattern(t, seed) };
        let (whole, _) = pcht_pattern(&p);
        let parts: Vec<(f64, CoefficientSet)> = p
            .items()
            .iter()
            .map(|it| {
                let single = Pattern::new(t, vec![Item::new(it.polygon.clone(), 1.0)]);
                (it.weight, pcht_pattern(&single).0)
            })
            .collect();
        let sum = scaled_sum(&parts, t);
        let scale = whole.energy().sqrt().max(1.0);
        prop_assert!(whole.max_abs_diff(&sum) <= 1e-12 * scale);
    }

    #[test]
    fn node_return_is_sum_of_children(seed in any::<u64>(), triangles: bool, level in 0u32..5, kx in 0u32..32, ky in 0u32..32) {
        let t = tile(64, 6);
        let p = if triangles { triangle_pattern(t, seed) } else { rectilinear_pattern(t, seed) };
        let span = 1u32 << level;
        let (kx, ky) = (kx % span, ky % span);
        for it in p.items() {
            let mut sink = CoefficientSet::new(t);
            let mut stats = TransformStats::default();
            let parent = pcht_polygon(&it.polygon, t, level, kx, ky, 1.0, &mut sink, &mut stats);
            let children: f64 = [(0, 0), (1, 0), (0, 1), (1, 1)]
                .iter()
                .map(|&(dx, dy)| {
                    pcht_polygon(&it.polygon, t, level + 1, 2 * kx + dx, 2 * ky + dy, 2.0, &mut sink, &mut stats)
                })
                .sum();
            if triangles {
                prop_assert!((parent - children).abs() <= 1e-9 * t.cell(level, 0, 0).area() as f64);
            } else {
                prop_assert_eq!(parent, children);
            }
        }
    }

    #[test]
    fn pcht_equals_binary_dht_exactly(seed in any::<u64>()) {
        let p = rectilinear_pattern(tile(64, 6), seed);
        let (cs, _) = pcht_pattern(&p);
        let dht = dht_transform(&rasterize(&p, RasterMode::BinarySample), p.tile()).unwrap();
        prop_assert_eq!(cs, dht);
    }

    #[test]
    fn pcht_equals_exact_coverage_dht_on_triangles(seed in any::<u64>(), depth in 0u32..6) {
        let p = triangle_pattern(tile(64, depth), seed);
        let (cs, _) = pcht_pattern(&p);
        let dht = dht_transform(&rasterize(&p, RasterMode::ExactCoverage), p.tile()).unwrap();
        prop_assert!(cs.max_abs_diff(&dht) <= 1e-9);
    }

    #[test]
    fn visits_stay_under_dense_bound(seed in any::<u64>()) {
        let p = rectilinear_pattern(tile(64, 6), seed);
        for i in 0..p.len() {
            let (_, stats) = pcht_pattern(&p.single(i));
            prop_assert_eq!(stats.area_calls, stats.nodes_visited);
            prop_assert!(stats.nodes_visited <= p.tile().dense_node_count());
            prop_assert_eq!(
                stats.nodes_visited,
                stats.pruned_empty + stats.pruned_full + stats.leaf_terminations
                    + (stats.nodes_visited - 1) / 4
            );
        }
    }
}

/// Every detail inside a subtree rooted at an empty or full cell is zero.
#[test]
fn pruned_subtrees_have_zero_details() {
    let t = tile(32, 5);
    for seed in 0..30 {
        let p = rectilinear_pattern(t, seed);
        for it in p.items() {
            let single = Pattern::new(t, vec![Item::new(it.polygon.clone(), 1.0)]);
            let oracle = OracleGrid::new(&single, 32).unwrap();
            for level in 0..t.depth() {
                let span = 1u32 << level;
                for ky in 0..span {
                    for kx in 0..span {
                        let cell = t.cell(level, kx, ky);
                        let a = intersection_area(&it.polygon, &Rect::from(cell));
                        if a != 0.0 && a != cell.area() as f64 {
                            continue;
                        }
                        for sub in level..t.depth() {
                            let f = 1u32 << (sub - level);
                            for dy in 0..f {
                                for dx in 0..f {
                                    for sb in Subband::ALL {
                                        let idx = CoeffIndex::new(sb, sub, kx * f + dx, ky * f + dy);
                                        assert_eq!(oracle.inner_product(Basis::Detail(idx)).unwrap(), 0.0);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn stats_at_the_extremes() {
    let t = tile(64, 6);
    let whole = Pattern::new(t, vec![Item::new(polyhaar::Polygon::rectangle(0, 0, 64, 64).unwrap(), 2.0)]);
    assert_eq!(pcht_pattern(&whole).1.nodes_visited, 1);
    assert_eq!(pcht_pattern(&Pattern::empty(t)).1.nodes_visited, 0);
}
