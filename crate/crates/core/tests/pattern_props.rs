mod common;

use common::{rectilinear_pattern, reversed, triangle_pattern};
use polyhaar::pattern::{generate_synthetic, pattern_energy, Item, SyntheticKind};
use polyhaar::{Pattern, Tile};
use proptest::prelude::*;

fn tile64() -> Tile {
    Tile::new(64, 64, 6).unwrap()
}

fn any_pattern(seed: u64, triangles: bool) -> Pattern {
    if triangles {
        triangle_pattern(tile64(), seed)
    } else {
        rectilinear_pattern(tile64(), seed)
    }
}

proptest! {
    #[test]
    fn generated_patterns_validate(seed in any::<u64>(), count in 0usize..40, contacts: bool, size_log in 6u32..11) {
        // Random outlines need room: up to 48 units per side and 40 of them.
        let size = if contacts { 1u64 << size_log } else { 1u64 << size_log.max(9) };
        let tile = Tile::with_default_depth(size, size).unwrap();
        let kind = if contacts { SyntheticKind::ContactArray } else { SyntheticKind::RandomRectilinear };
        let p = generate_synthetic(kind, tile, count, seed).unwrap();
        prop_assert_eq!(p.len(), count);
        prop_assert!(p.validate().is_ok());
    }

    #[test]
    fn energy_ignores_item_order_and_orientation(seed in any::<u64>(), triangles: bool, rot in 0usize..16) {
        let p = any_pattern(seed, triangles);
        let mut items: Vec<Item> = p.items().to_vec();
        if !items.is_empty() {
            let k = rot % items.len();
            items.rotate_left(k);
            items[0] = Item::new(reversed(&items[0].polygon), items[0].weight);
        }
        items.reverse();
        let q = Pattern::new(p.tile(), items);
        let (e, f) = (pattern_energy(&p), pattern_energy(&q));
        prop_assert!((e - f).abs() <= 1e-12 * e.abs().max(1.0));
    }

    #[test]
    fn energy_scales_quadratically(seed in any::<u64>(), triangles: bool, c in -8.0f64..8.0) {
        let p = any_pattern(seed, triangles);
        let scaled = Pattern::new(
            p.tile(),
            p.items().iter().map(|it| Item::new(it.polygon.clone(), c * it.weight)).collect(),
        );
        let (e, f) = (pattern_energy(&p), pattern_energy(&scaled));
        prop_assert!((f - c * c * e).abs() <= 1e-12 * (c * c * e).abs().max(1.0));
    }
}

#[test]
fn generation_is_deterministic() {
    let tile = Tile::with_default_depth(1024, 1024).unwrap();
    for kind in [SyntheticKind::ContactArray, SyntheticKind::RandomRectilinear] {
        let a = generate_synthetic(kind, tile, 16, 7).unwrap();
        let b = generate_synthetic(kind, tile, 16, 7).unwrap();
        let pa: Vec<_> = a.items().iter().map(|i| i.polygon.points()).collect();
        let pb: Vec<_> = b.items().iter().map(|i| i.polygon.points()).collect();
        assert_eq!(pa, pb);
    }
}
