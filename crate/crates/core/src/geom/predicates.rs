use robust::{orient2d, Coord};

use super::Point;

/// Closed straight segment between two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(self.b)
    }

    #[inline]
    fn bbox_disjoint(&self, other: &Segment) -> bool {
        self.a.x.max(self.b.x) < other.a.x.min(other.b.x)
            || other.a.x.max(other.b.x) < self.a.x.min(self.b.x)
            || self.a.y.max(self.b.y) < other.a.y.min(other.b.y)
            || other.a.y.max(other.b.y) < self.a.y.min(self.b.y)
    }
}

#[inline]
pub(crate) fn coord(p: Point) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Exact orientation sign of `c` relative to the directed line `a -> b`.
#[inline]
pub(crate) fn orientation(a: Point, b: Point, c: Point) -> i8 {
    let o = orient2d(coord(a), coord(b), coord(c));
    if o > 0.0 {
        1
    } else if o < 0.0 {
        -1
    } else {
        0
    }
}

/// True iff the interiors of the two segments cross at a single point.
/// Shared endpoints, touching and collinear overlap are not proper crossings.
pub fn segments_properly_intersect(s: &Segment, t: &Segment) -> bool {
    if s.bbox_disjoint(t) {
        return false;
    }
    let o1 = orientation(s.a, s.b, t.a);
    let o2 = orientation(s.a, s.b, t.b);
    if o1 == 0 || o2 == 0 || o1 == o2 {
        return false;
    }
    let o3 = orientation(t.a, t.b, s.a);
    let o4 = orientation(t.a, t.b, s.b);
    o3 != 0 && o4 != 0 && o3 != o4
}

/// True iff `seg` properly crosses a boundary edge `(k, k+1)` where neither
/// `k` nor `k+1` is listed in `skip`.
pub fn segment_intersects_boundary(seg: &Segment, vertices: &[Point], skip: &[usize]) -> bool {
    let n = vertices.len();
    let (min_x, max_x) = (seg.a.x.min(seg.b.x), seg.a.x.max(seg.b.x));
    let (min_y, max_y) = (seg.a.y.min(seg.b.y), seg.a.y.max(seg.b.y));
    for k in 0..n {
        let k1 = (k + 1) % n;
        let (p, q) = (vertices[k], vertices[k1]);
        if p.x.max(q.x) < min_x || p.x.min(q.x) > max_x || p.y.max(q.y) < min_y || p.y.min(q.y) > max_y {
            continue;
        }
        if skip.contains(&k) || skip.contains(&k1) {
            continue;
        }
        if segments_properly_intersect(seg, &Segment::new(p, q)) {
            return true;
        }
    }
    false
}

/// Even-odd point-in-polygon test. Points exactly on an edge may go either
/// way.
pub fn point_in_polygon(p: Point, polygon: &[Point]) -> bool {
    let n = polygon.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (a, b) = (polygon[i], polygon[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Strict interior test for a triangle of either orientation.
pub fn point_in_triangle(p: Point, tri: [Point; 3]) -> bool {
    let o1 = orientation(tri[0], tri[1], p);
    let o2 = orientation(tri[1], tri[2], p);
    let o3 = orientation(tri[2], tri[0], p);
    o1 != 0 && o1 == o2 && o2 == o3
}

/// True iff `seg` passes through the interior of the triangle: it properly
/// crosses an edge or has an endpoint or midpoint strictly inside.
pub fn segment_crosses_triangle(seg: &Segment, tri: [Point; 3]) -> bool {
    if [seg.a, seg.b, seg.midpoint()]
        .iter()
        .any(|&p| point_in_triangle(p, tri))
    {
        return true;
    }
    (0..3).any(|k| segments_properly_intersect(seg, &Segment::new(tri[k], tri[(k + 1) % 3])))
}
