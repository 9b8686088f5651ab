//! Bowyer-Watson Delaunay triangulation for small seed sets.
//!
//! Points are inserted in index order and a triangle is destroyed only when
//! the new point lies strictly inside its circumcircle, so cocircular ties
//! keep the triangles built from lower indices and the output is
//! deterministic.

use robust::incircle;

use super::predicates::{coord, orientation};
use super::Point;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    /// Point indices in counter-clockwise order.
    pub vertices: [usize; 3],
    pub circumcenter: Point,
    pub circumradius: f64,
}

impl Triangle {
    pub fn corners(&self, points: &[Point]) -> [Point; 3] {
        self.vertices.map(|v| points[v])
    }

    pub fn centroid(&self, points: &[Point]) -> Point {
        let [a, b, c] = self.corners(points);
        Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    /// Edge `k` joins `vertices[k]` and `vertices[(k + 1) % 3]`.
    pub fn edge(&self, k: usize) -> (usize, usize) {
        (self.vertices[k], self.vertices[(k + 1) % 3])
    }

    /// Interior angles in degrees, at `vertices[0..3]`.
    pub fn angles_deg(&self, points: &[Point]) -> [f64; 3] {
        let p = self.corners(points);
        [0, 1, 2].map(|k| {
            let u = p[(k + 1) % 3] - p[k];
            let v = p[(k + 2) % 3] - p[k];
            u.cross(v).abs().atan2(u.dot(v)).to_degrees()
        })
    }
}

/// Circumcentre and circumradius; `None` for collinear points.
pub fn circumcircle(a: Point, b: Point, c: Point) -> Option<(Point, f64)> {
    let bx = b - a;
    let cx = c - a;
    let d = 2.0 * bx.cross(cx);
    if d == 0.0 {
        return None;
    }
    let b2 = bx.dot(bx);
    let c2 = cx.dot(cx);
    let ux = (cx.y * b2 - bx.y * c2) / d;
    let uy = (bx.x * c2 - cx.x * b2) / d;
    let center = a + Point::new(ux, uy);
    Some((center, Point::new(ux, uy).norm()))
}

fn make_triangle(points: &[Point], mut v: [usize; 3]) -> Triangle {
    if orientation(points[v[0]], points[v[1]], points[v[2]]) < 0 {
        v.swap(1, 2);
    }
    let (circumcenter, circumradius) =
        circumcircle(points[v[0]], points[v[1]], points[v[2]]).unwrap_or((points[v[0]], f64::INFINITY));
    Triangle {
        vertices: v,
        circumcenter,
        circumradius,
    }
}

/// Delaunay triangulation of `points`. Output triangles are counter-clockwise
/// and sorted by their vertex index triples.
pub fn delaunay(points: &[Point]) -> Result<Vec<Triangle>> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Err(Error::DuplicateSeed(i, j));
            }
        }
    }
    if n < 3 || (2..n).all(|k| orientation(points[0], points[1], points[k]) == 0) {
        return Err(Error::EmptyTriangulation);
    }

    let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in points {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1.0) * 1.0e5;
    let mid = Point::new(0.5 * (min_x + max_x), 0.5 * (min_y + max_y));
    let mut all = points.to_vec();
    all.push(mid + Point::new(-span, -span));
    all.push(mid + Point::new(span, -span));
    all.push(mid + Point::new(0.0, span));

    let mut tris: Vec<[usize; 3]> = vec![make_triangle(&all, [n, n + 1, n + 2]).vertices];
    for p in 0..n {
        let (bad, keep): (Vec<[usize; 3]>, Vec<[usize; 3]>) = tris.into_iter().partition(|t| {
            incircle(coord(all[t[0]]), coord(all[t[1]]), coord(all[t[2]]), coord(all[p])) > 0.0
        });
        // edges of the cavity appear in exactly one bad triangle
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for t in &bad {
            for k in 0..3 {
                let e = (t[k], t[(k + 1) % 3]);
                if let Some(pos) = edges.iter().position(|&(a, b)| (a, b) == (e.1, e.0)) {
                    edges.remove(pos);
                } else {
                    edges.push(e);
                }
            }
        }
        tris = keep;
        for (a, b) in edges {
            tris.push(make_triangle(&all, [a, b, p]).vertices);
        }
    }

    let mut out: Vec<Triangle> = tris
        .into_iter()
        .filter(|t| t.iter().all(|&v| v < n))
        .map(|t| make_triangle(points, t))
        .collect();
    out.sort_by_key(|t| {
        let mut k = t.vertices;
        k.sort_unstable();
        k
    });
    if out.is_empty() {
        return Err(Error::EmptyTriangulation);
    }
    Ok(out)
}
