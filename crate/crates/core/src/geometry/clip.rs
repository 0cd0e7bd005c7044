//! Sutherland–Hodgman clipping against axis-aligned rectangles and convex
//! windows, plus the intersection-area kernel built on top of it.
//!
//! Clipping a non-convex subject against a convex window can leave zero-width
//! corridors along the window boundary. They enclose no area, and area is the
//! only thing consumed downstream.

use super::{IPoint, IRect, Point, Polygon, Rect};

/// Reusable scratch buffers for repeated clipping.
///
/// A transform issues one intersection query per visited tree node, so the
/// buffers are kept across calls instead of being reallocated.
#[derive(Debug, Default)]
pub struct Clipper {
    ia: Vec<IPoint>,
    ib: Vec<IPoint>,
    ra: Vec<Point>,
    rb: Vec<Point>,
}

impl Clipper {
    pub fn new() -> Self {
        Self::default()
    }

    /// Exact area of `poly ∩ rect` on the integer path, approximate otherwise.
    pub fn intersection_area(&mut self, poly: &Polygon, rect: &Rect) -> f64 {
        if let Some(ir) = rect.to_int() {
            if let Some(doubled) = self.doubled_area_exact(poly, &ir) {
                return (doubled / 2) as f64;
            }
        }
        let bbox = poly.bbox();
        if bbox.is_disjoint(rect) {
            return 0.0;
        }
        if rect.contains_rect(&bbox) {
            return poly.area();
        }
        let clipped = self.clip_real(poly, rect);
        real_area_about(clipped, Point::new(rect.x0, rect.y0))
    }

    /// Twice the area of `poly ∩ rect`, computed exactly. Returns `None` when
    /// the polygon is not on the rectilinear-integer path.
    pub fn doubled_area_exact(&mut self, poly: &Polygon, rect: &IRect) -> Option<i128> {
        let ring = poly.int_ring()?;
        let bbox = poly.int_bbox()?;
        if bbox.is_disjoint(rect) {
            return Some(0);
        }
        if rect.contains_rect(&bbox) {
            return poly.doubled_area_exact();
        }
        // A normalized rectilinear ring with four vertices is its own bbox.
        if ring.len() == 4 {
            let w = (bbox.x1.min(rect.x1) - bbox.x0.max(rect.x0)) as i128;
            let h = (bbox.y1.min(rect.y1) - bbox.y0.max(rect.y0)) as i128;
            return Some(2 * w * h);
        }
        let clipped = self.clip_int(ring, rect);
        Some(int_doubled_area_about(clipped, IPoint::new(rect.x0, rect.y0)))
    }

    /// Clips `poly` against a rectangle and returns the resulting loop as
    /// real points. Empty when the intersection has zero area.
    pub fn clip(&mut self, poly: &Polygon, rect: &Rect) -> Vec<Point> {
        if let (Some(ring), Some(ir)) = (poly.int_ring(), rect.to_int()) {
            let out = self.clip_int(ring, &ir);
            if int_doubled_area_about(out, IPoint::new(ir.x0, ir.y0)) == 0 {
                return Vec::new();
            }
            return out.iter().copied().map(Point::from).collect();
        }
        let out = self.clip_real(poly, rect);
        if real_area_about(out, Point::new(rect.x0, rect.y0)) == 0.0 {
            return Vec::new();
        }
        out.to_vec()
    }

    fn clip_int(&mut self, ring: &[IPoint], r: &IRect) -> &[IPoint] {
        // Only axis-parallel edges reach this path, so an edge that crosses a
        // vertical window line is horizontal and vice versa: every crossing
        // point is integral.
        let (a, b) = (&mut self.ia, &mut self.ib);
        clip_pass(ring, b, |p| p.x >= r.x0, |p, q| IPoint::new(r.x0, if p.y == q.y { p.y } else { cross_y(p, q, r.x0) }));
        clip_pass(b, a, |p| p.x <= r.x1, |p, q| IPoint::new(r.x1, if p.y == q.y { p.y } else { cross_y(p, q, r.x1) }));
        clip_pass(a, b, |p| p.y >= r.y0, |p, q| IPoint::new(if p.x == q.x { p.x } else { cross_x(p, q, r.y0) }, r.y0));
        clip_pass(b, a, |p| p.y <= r.y1, |p, q| IPoint::new(if p.x == q.x { p.x } else { cross_x(p, q, r.y1) }, r.y1));
        a
    }

    fn clip_real(&mut self, poly: &Polygon, r: &Rect) -> &[Point] {
        let (a, b) = (&mut self.ra, &mut self.rb);
        match poly.real_ring() {
            Some(ring) => clip_pass(ring, b, |p| p.x >= r.x0, |p, q| at_x(p, q, r.x0)),
            None => {
                a.clear();
                a.extend(poly.int_ring().unwrap_or_default().iter().copied().map(Point::from));
                clip_pass(a, b, |p| p.x >= r.x0, |p, q| at_x(p, q, r.x0));
            }
        }
        clip_pass(b, a, |p| p.x <= r.x1, |p, q| at_x(p, q, r.x1));
        clip_pass(a, b, |p| p.y >= r.y0, |p, q| at_y(p, q, r.y0));
        clip_pass(b, a, |p| p.y <= r.y1, |p, q| at_y(p, q, r.y1));
        a
    }

    /// Area of `poly` clipped against a clockwise convex loop.
    pub(crate) fn convex_clip_area(&mut self, poly: &Polygon, window: &[Point]) -> f64 {
        let (a, b) = (&mut self.ra, &mut self.rb);
        a.clear();
        a.extend(poly.points());
        let n = window.len();
        for i in 0..n {
            let (e0, e1) = (window[i], window[(i + 1) % n]);
            if e0 == e1 {
                continue;
            }
            let side = |p: Point| (e1.x - e0.x) * (p.y - e0.y) - (e1.y - e0.y) * (p.x - e0.x);
            clip_pass(a, b, |p| side(p) <= 0.0, |p, q| {
                let (sp, sq) = (side(p), side(q));
                let t = sp / (sp - sq);
                Point::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
            });
            std::mem::swap(a, b);
        }
        real_area_about(a, window[0])
    }
}

fn cross_y(p: IPoint, q: IPoint, x: i64) -> i64 {
    // Unreachable for rectilinear rings; kept total for safety of the API.
    p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x)
}

fn cross_x(p: IPoint, q: IPoint, y: i64) -> i64 {
    p.x + (q.x - p.x) * (y - p.y) / (q.y - p.y)
}

fn at_x(p: Point, q: Point, x: f64) -> Point {
    let t = (x - p.x) / (q.x - p.x);
    Point::new(x, p.y + t * (q.y - p.y))
}

fn at_y(p: Point, q: Point, y: f64) -> Point {
    let t = (y - p.y) / (q.y - p.y);
    Point::new(p.x + t * (q.x - p.x), y)
}

/// One Sutherland–Hodgman pass against a single half-plane.
fn clip_pass<P: Copy>(
    input: &[P],
    output: &mut Vec<P>,
    inside: impl Fn(P) -> bool,
    crossing: impl Fn(P, P) -> P,
) {
    output.clear();
    let Some(&last) = input.last() else {
        return;
    };
    let mut prev = last;
    let mut prev_in = inside(prev);
    for &cur in input {
        let cur_in = inside(cur);
        if cur_in {
            if !prev_in {
                output.push(crossing(prev, cur));
            }
            output.push(cur);
        } else if prev_in {
            output.push(crossing(prev, cur));
        }
        prev = cur;
        prev_in = cur_in;
    }
}

fn int_doubled_area_about(ring: &[IPoint], o: IPoint) -> i128 {
    let n = ring.len();
    let mut sum: i128 = 0;
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        let (ax, ay) = ((a.x - o.x) as i128, (a.y - o.y) as i128);
        let (bx, by) = ((b.x - o.x) as i128, (b.y - o.y) as i128);
        sum += ax * by - bx * ay;
    }
    sum.abs()
}

fn real_area_about(ring: &[Point], o: Point) -> f64 {
    let n = ring.len();
    let mut sum = 0.0;
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        sum += (a.x - o.x) * (b.y - o.y) - (b.x - o.x) * (a.y - o.y);
    }
    0.5 * sum.abs()
}

/// Area enclosed by a vertex loop such as the output of [`clip_to_rect`].
pub fn loop_area(ring: &[Point]) -> f64 {
    match ring.first() {
        Some(&o) => real_area_about(ring, o),
        None => 0.0,
    }
}

/// Clips a polygon to a rectangle. The loop may contain zero-area corridors
/// when the polygon is not convex; it is empty when nothing is left.
pub fn clip_to_rect(poly: &Polygon, rect: &Rect) -> Vec<Point> {
    Clipper::new().clip(poly, rect)
}

/// Area of `poly ∩ rect`.
pub fn intersection_area(poly: &Polygon, rect: &Rect) -> f64 {
    Clipper::new().intersection_area(poly, rect)
}
