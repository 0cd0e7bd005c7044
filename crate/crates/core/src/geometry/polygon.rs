use std::fmt;

use super::{GeometryError, IPoint, IRect, Point, Rect, MAX_INT_COORD};

/// Which arithmetic path a polygon takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolygonKind {
    /// Every edge axis-parallel and every coordinate an integer.
    RectilinearInteger,
    /// Anything else; handled in double precision.
    GeneralReal,
}

#[derive(Clone, Debug, PartialEq)]
enum Ring {
    Int(Vec<IPoint>),
    Real(Vec<Point>),
}

/// A simple polygon in canonical form.
///
/// Construction removes repeated and collinear vertices, orients the ring
/// clockwise (y axis pointing up) and rotates it so that the lexicographically
/// smallest vertex comes first. Two polygons describing the same region with
/// the same vertex set therefore compare equal.
///
/// Simplicity is not checked on construction; see [`Polygon::is_simple`].
#[derive(Clone, PartialEq)]
pub struct Polygon {
    ring: Ring,
    bbox: Rect,
    ibbox: Option<IRect>,
    doubled_area: i128,
    area: f64,
}

impl fmt::Debug for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ring {
            Ring::Int(v) => f
                .debug_list()
                .entries(v.iter().map(|p| (p.x, p.y)))
                .finish(),
            Ring::Real(v) => f
                .debug_list()
                .entries(v.iter().map(|p| (p.x, p.y)))
                .finish(),
        }
    }
}

impl Polygon {
    /// Builds a polygon from real coordinates. Integral, axis-parallel input
    /// lands on the exact integer path automatically.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let integral = vertices.iter().all(|p| {
            p.x.fract() == 0.0
                && p.y.fract() == 0.0
                && p.x.abs() <= MAX_INT_COORD as f64
                && p.y.abs() <= MAX_INT_COORD as f64
        });
        if integral {
            let ints = vertices
                .iter()
                .map(|p| IPoint::new(p.x as i64, p.y as i64))
                .collect();
            return Self::from_ipoints(ints);
        }
        let ring = normalize(vertices, |a, b, c| {
            let cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
            cross == 0.0
        }, real_doubled_area)?;
        let ring = rotate_to_min(ring, |a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        Ok(Self::from_real_ring(ring))
    }

    pub fn from_ipoints(vertices: Vec<IPoint>) -> Result<Self, GeometryError> {
        if let Some(p) = vertices
            .iter()
            .find(|p| p.x.abs() > MAX_INT_COORD || p.y.abs() > MAX_INT_COORD)
        {
            let bad = if p.x.abs() > MAX_INT_COORD { p.x } else { p.y };
            return Err(GeometryError::CoordinateOverflow(bad));
        }
        let ring = normalize(vertices, |a, b, c| {
            let cross = (b.x - a.x) as i128 * (c.y - a.y) as i128
                - (b.y - a.y) as i128 * (c.x - a.x) as i128;
            cross == 0
        }, |v| int_doubled_area(v) as f64)?;
        let ring = rotate_to_min(ring, |a, b| a.cmp(b));
        let rectilinear = (0..ring.len()).all(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
            a.x == b.x || a.y == b.y
        });
        if rectilinear {
            let doubled_area = -int_doubled_area(&ring);
            let (mut x0, mut y0, mut x1, mut y1) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
            for p in &ring {
                x0 = x0.min(p.x);
                y0 = y0.min(p.y);
                x1 = x1.max(p.x);
                y1 = y1.max(p.y);
            }
            let ibbox = IRect { x0, y0, x1, y1 };
            Ok(Self {
                ring: Ring::Int(ring),
                bbox: ibbox.into(),
                ibbox: Some(ibbox),
                doubled_area,
                area: (doubled_area / 2) as f64,
            })
        } else {
            Ok(Self::from_real_ring(ring.into_iter().map(Point::from).collect()))
        }
    }

    /// Shorthand for integer vertex lists, mostly for tests and examples.
    pub fn from_int(vertices: &[(i64, i64)]) -> Result<Self, GeometryError> {
        Self::from_ipoints(vertices.iter().map(|&(x, y)| IPoint::new(x, y)).collect())
    }

    /// Axis-aligned integer rectangle `[x0, x1] x [y0, y1]`.
    pub fn rectangle(x0: i64, y0: i64, x1: i64, y1: i64) -> Result<Self, GeometryError> {
        Self::from_int(&[(x0, y0), (x0, y1), (x1, y1), (x1, y0)])
    }

    fn from_real_ring(ring: Vec<Point>) -> Self {
        let area = -real_doubled_area(&ring) / 2.0;
        let mut bbox = Rect {
            x0: f64::INFINITY,
            y0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for p in &ring {
            bbox.x0 = bbox.x0.min(p.x);
            bbox.y0 = bbox.y0.min(p.y);
            bbox.x1 = bbox.x1.max(p.x);
            bbox.y1 = bbox.y1.max(p.y);
        }
        Self {
            ring: Ring::Real(ring),
            bbox,
            ibbox: None,
            doubled_area: 0,
            area,
        }
    }

    pub fn kind(&self) -> PolygonKind {
        match self.ring {
            Ring::Int(_) => PolygonKind::RectilinearInteger,
            Ring::Real(_) => PolygonKind::GeneralReal,
        }
    }

    /// Number of vertices after normalization.
    pub fn len(&self) -> usize {
        match &self.ring {
            Ring::Int(v) => v.len(),
            Ring::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Enclosed area, non-negative.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Twice the enclosed area, exact. `None` on the real path.
    pub fn doubled_area_exact(&self) -> Option<i128> {
        self.ibbox.map(|_| self.doubled_area)
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    pub fn int_bbox(&self) -> Option<IRect> {
        self.ibbox
    }

    pub fn int_ring(&self) -> Option<&[IPoint]> {
        match &self.ring {
            Ring::Int(v) => Some(v),
            Ring::Real(_) => None,
        }
    }

    pub fn real_ring(&self) -> Option<&[Point]> {
        match &self.ring {
            Ring::Real(v) => Some(v),
            Ring::Int(_) => None,
        }
    }

    /// Vertices as real points, clockwise, smallest vertex first.
    pub fn points(&self) -> Vec<Point> {
        match &self.ring {
            Ring::Int(v) => v.iter().copied().map(Point::from).collect(),
            Ring::Real(v) => v.clone(),
        }
    }

    /// True when no two edges meet except consecutive edges at their shared
    /// vertex.
    pub fn is_simple(&self) -> bool {
        match &self.ring {
            Ring::Int(v) => {
                let orient = |a: IPoint, b: IPoint, c: IPoint| {
                    ((b.x - a.x) as i128 * (c.y - a.y) as i128
                        - (b.y - a.y) as i128 * (c.x - a.x) as i128)
                        .signum() as i32
                };
                let pts: Vec<(f64, f64)> = v.iter().map(|p| (p.x as f64, p.y as f64)).collect();
                no_crossings(v, &pts, orient)
            }
            Ring::Real(v) => {
                let orient = |a: Point, b: Point, c: Point| {
                    let cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
                    if cross > 0.0 {
                        1
                    } else if cross < 0.0 {
                        -1
                    } else {
                        0
                    }
                };
                let pts: Vec<(f64, f64)> = v.iter().map(|p| (p.x, p.y)).collect();
                no_crossings(v, &pts, orient)
            }
        }
    }
}

fn int_doubled_area(v: &[IPoint]) -> i128 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a.x as i128 * b.y as i128 - b.x as i128 * a.y as i128
        })
        .sum()
}

fn real_doubled_area(v: &[Point]) -> f64 {
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    let o = v[0];
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            (a.x - o.x) * (b.y - o.y) - (b.x - o.x) * (a.y - o.y)
        })
        .sum()
}

/// Drops repeated and collinear vertices, then orients the ring clockwise.
fn normalize<P: Copy + PartialEq>(
    mut ring: Vec<P>,
    collinear: impl Fn(P, P, P) -> bool,
    doubled_area: impl Fn(&[P]) -> f64,
) -> Result<Vec<P>, GeometryError> {
    loop {
        ring.dedup();
        while ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        let n = ring.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        match (0..n).find(|&i| collinear(ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n])) {
            Some(i) => {
                ring.remove(i);
            }
            None => break,
        }
    }
    let a2 = doubled_area(&ring);
    if a2 == 0.0 {
        return Err(GeometryError::ZeroArea);
    }
    if a2 > 0.0 {
        ring.reverse();
    }
    Ok(ring)
}

fn rotate_to_min<P: Copy>(mut ring: Vec<P>, cmp: impl Fn(&P, &P) -> std::cmp::Ordering) -> Vec<P> {
    let start = (0..ring.len())
        .min_by(|&a, &b| cmp(&ring[a], &ring[b]))
        .unwrap_or(0);
    ring.rotate_left(start);
    ring
}

/// Checks every pair of non-consecutive edges for contact. Consecutive edges
/// cannot overlap once collinear vertices are gone.
fn no_crossings<P: Copy>(v: &[P], xy: &[(f64, f64)], orient: impl Fn(P, P, P) -> i32) -> bool {
    let n = v.len();
    let on_segment = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| {
        a.0.min(b.0) <= c.0 && c.0 <= a.0.max(b.0) && a.1.min(b.1) <= c.1 && c.1 <= a.1.max(b.1)
    };
    let mut edges: Vec<(f64, f64, usize)> = (0..n)
        .map(|i| {
            let (a, b) = (xy[i], xy[(i + 1) % n]);
            (a.0.min(b.0), a.0.max(b.0), i)
        })
        .collect();
    edges.sort_by(|l, r| l.0.total_cmp(&r.0));
    for (ei, &(_, xmax, e1)) in edges.iter().enumerate() {
        for &(xmin2, _, e2) in &edges[ei + 1..] {
            if xmin2 > xmax {
                break;
            }
            let (i, k) = (e1.min(e2), e1.max(e2));
            if k == i + 1 || (i == 0 && k == n - 1) {
                continue;
            }
            let (a, b) = (v[i], v[(i + 1) % n]);
            let (c, d) = (v[k], v[(k + 1) % n]);
            let (o1, o2) = (orient(a, b, c), orient(a, b, d));
            let (o3, o4) = (orient(c, d, a), orient(c, d, b));
            if o1 * o2 < 0 && o3 * o4 < 0 {
                return false;
            }
            let (pa, pb) = (xy[i], xy[(i + 1) % n]);
            let (pc, pd) = (xy[k], xy[(k + 1) % n]);
            if (o1 == 0 && on_segment(pa, pb, pc))
                || (o2 == 0 && on_segment(pa, pb, pd))
                || (o3 == 0 && on_segment(pc, pd, pa))
                || (o4 == 0 && on_segment(pc, pd, pb))
            {
                return false;
            }
        }
    }
    true
}
