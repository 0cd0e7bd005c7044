//! Continuous 2D Haar transform of weighted polygonal patterns.
//!
//! The transform is computed directly from polygon vertex lists by a pruned
//! recursion over the dyadic cells of a tile: a cell entirely inside or
//! outside a polygon has no detail coefficients below it, so the recursion
//! only descends along polygon boundaries. A rasterizing discrete transform
//! is provided as the baseline and produces the same coefficients.

pub mod geometry;
pub mod io;
pub mod pattern;
pub mod transform;

pub use geometry::{IPoint, IRect, Point, Polygon, PolygonKind, Rect};
pub use io::BenchRecord;
pub use pattern::{Pattern, Tile};
pub use transform::{
    pcht_pattern, CoeffIndex, CoefficientSet, CoefficientSink, Subband, TransformStats,
};
