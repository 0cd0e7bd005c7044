//! Exact polygon primitives.
//!
//! Polygons come in two flavours. Rectilinear polygons whose vertices all sit
//! on the integer grid are stored as `i64` rings and every area derived from
//! them is computed in exact integer arithmetic on doubled areas. Everything
//! else is stored as an `f64` ring and handled in double precision.
//!
//! Rectangles are half-open, `[x0, x1) x [y0, y1)`. Boundaries have measure
//! zero, so a polygon edge lying on a rectangle edge never contributes area.

mod clip;
mod polygon;

pub use clip::{clip_to_rect, intersection_area, loop_area, Clipper};
pub use polygon::{Polygon, PolygonKind};

use thiserror::Error;

/// Largest magnitude accepted for an integer coordinate.
///
/// With coordinates bounded by 2^31 every cross product fits in an `i64` and
/// shoelace sums over any realistic vertex count fit in an `i128`.
pub const MAX_INT_COORD: i64 = 1 << 31;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IPoint {
    pub x: i64,
    pub y: i64,
}

impl IPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

impl From<IPoint> for Point {
    fn from(p: IPoint) -> Self {
        Point::new(p.x as f64, p.y as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("integer coordinate {0} exceeds the supported range")]
    CoordinateOverflow(i64),
    #[error("rectangle [{x0}, {x1}) x [{y0}, {y1}) is empty")]
    EmptyRect { x0: f64, y0: f64, x1: f64, y1: f64 },
}

/// Half-open axis-aligned rectangle `[x0, x1) x [y0, y1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeometryError> {
        if !(x0.is_finite() && y0.is_finite() && x1.is_finite() && y1.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if !(x0 < x1 && y0 < y1) {
            return Err(GeometryError::EmptyRect { x0, y0, x1, y1 });
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// True when the two rectangles share no interior.
    pub fn is_disjoint(&self, other: &Rect) -> bool {
        self.x1 <= other.x0 || other.x1 <= self.x0 || self.y1 <= other.y0 || other.y1 <= self.y0
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x0 <= other.x0 && other.x1 <= self.x1 && self.y0 <= other.y0 && other.y1 <= self.y1
    }

    /// Returns the corners as integers when all four are integral and in range.
    pub fn to_int(&self) -> Option<IRect> {
        let conv = |v: f64| {
            (v.fract() == 0.0 && v.abs() <= MAX_INT_COORD as f64).then_some(v as i64)
        };
        Some(IRect {
            x0: conv(self.x0)?,
            y0: conv(self.y0)?,
            x1: conv(self.x1)?,
            y1: conv(self.y1)?,
        })
    }
}

/// Integer counterpart of [`Rect`], used on the exact path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IRect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl IRect {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Result<Self, GeometryError> {
        if !(x0 < x1 && y0 < y1) {
            return Err(GeometryError::EmptyRect {
                x0: x0 as f64,
                y0: y0 as f64,
                x1: x1 as f64,
                y1: y1 as f64,
            });
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn area(&self) -> i128 {
        (self.x1 - self.x0) as i128 * (self.y1 - self.y0) as i128
    }

    pub fn is_disjoint(&self, other: &IRect) -> bool {
        self.x1 <= other.x0 || other.x1 <= self.x0 || self.y1 <= other.y0 || other.y1 <= self.y0
    }

    pub fn contains_rect(&self, other: &IRect) -> bool {
        self.x0 <= other.x0 && other.x1 <= self.x1 && self.y0 <= other.y0 && other.y1 <= self.y1
    }
}

impl From<IRect> for Rect {
    fn from(r: IRect) -> Self {
        Rect {
            x0: r.x0 as f64,
            y0: r.y0 as f64,
            x1: r.x1 as f64,
            y1: r.y1 as f64,
        }
    }
}

/// Enclosed area of a polygon. Exact for rectilinear-integer polygons.
pub fn signed_area(poly: &Polygon) -> f64 {
    poly.area()
}

pub fn is_rectilinear(poly: &Polygon) -> bool {
    poly.kind() == PolygonKind::RectilinearInteger
}

pub fn bounding_box(poly: &Polygon) -> Rect {
    poly.bbox()
}

/// Crossing-number point-in-polygon test. Points on the boundary may land on
/// either side.
pub fn contains_point(poly: &Polygon, p: Point) -> bool {
    let verts = poly.points();
    let mut inside = false;
    let n = verts.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (verts[i], verts[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Area of the intersection of two simple polygons.
///
/// `q` is cut into vertical-slab trapezoids, each of which is convex, and `p`
/// is clipped against every trapezoid. When both polygons are
/// rectilinear-integer the trapezoids are integer rectangles and the result
/// is exact.
pub fn overlap_area(p: &Polygon, q: &Polygon) -> f64 {
    if p.bbox().is_disjoint(&q.bbox()) {
        return 0.0;
    }
    let mut clipper = Clipper::new();
    if let (Some(_), Some(qi)) = (p.int_ring(), q.int_ring()) {
        let mut doubled: i128 = 0;
        for r in rectilinear_slabs(qi) {
            doubled += clipper
                .doubled_area_exact(p, &r)
                .expect("integer polygon has an exact area");
        }
        return doubled as f64 / 2.0;
    }
    let window = p.bbox();
    trapezoids(&q.points())
        .iter()
        .filter(|t| {
            let bb = loop_bbox(t);
            !(bb.1 <= window.x0 || window.x1 <= bb.0 || bb.3 <= window.y0 || window.y1 <= bb.2)
        })
        .map(|t| clipper.convex_clip_area(p, t))
        .sum()
}

fn loop_bbox(pts: &[Point]) -> (f64, f64, f64, f64) {
    pts.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(x0, x1, y0, y1), p| (x0.min(p.x), x1.max(p.x), y0.min(p.y), y1.max(p.y)),
    )
}

/// Decomposes a rectilinear ring into disjoint rectangles, one vertical slab
/// at a time.
fn rectilinear_slabs(ring: &[IPoint]) -> Vec<IRect> {
    let mut xs: Vec<i64> = ring.iter().map(|p| p.x).collect();
    xs.sort_unstable();
    xs.dedup();
    let n = ring.len();
    let mut out = Vec::new();
    let mut ys = Vec::new();
    for w in xs.windows(2) {
        let (xa, xb) = (w[0], w[1]);
        ys.clear();
        for i in 0..n {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            if a.y == b.y && a.x.min(b.x) <= xa && xb <= a.x.max(b.x) {
                ys.push(a.y);
            }
        }
        ys.sort_unstable();
        for pair in ys.chunks_exact(2) {
            if pair[0] < pair[1] {
                out.push(IRect { x0: xa, y0: pair[0], x1: xb, y1: pair[1] });
            }
        }
    }
    out
}

/// Vertical-slab trapezoidal decomposition of a simple polygon. Each returned
/// loop is convex and oriented clockwise.
fn trapezoids(ring: &[Point]) -> Vec<Vec<Point>> {
    let mut xs: Vec<f64> = ring.iter().map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let n = ring.len();
    let mut out = Vec::new();
    let mut cuts: Vec<(f64, f64, f64)> = Vec::new();
    for w in xs.windows(2) {
        let (xa, xb) = (w[0], w[1]);
        let xm = 0.5 * (xa + xb);
        cuts.clear();
        for i in 0..n {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            if a.x == b.x || a.x.min(b.x) > xa || a.x.max(b.x) < xb {
                continue;
            }
            let at = |x: f64| a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
            cuts.push((at(xm), at(xa), at(xb)));
        }
        cuts.sort_by(|l, r| l.0.total_cmp(&r.0));
        for pair in cuts.chunks_exact(2) {
            let (lo, hi) = (pair[0], pair[1]);
            out.push(vec![
                Point::new(xa, lo.1),
                Point::new(xa, hi.1),
                Point::new(xb, hi.2),
                Point::new(xb, lo.2),
            ]);
        }
    }
    out
}
