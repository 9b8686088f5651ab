use std::f64::consts::PI;

use super::predicates::{point_in_polygon, segment_intersects_boundary, segments_properly_intersect};
use super::{Point, Segment};
use crate::error::{Error, Result};
use crate::raster::{connected_components, LabelImage};

/// Minimum number of vertices for a usable closed contour.
pub const MIN_VERTICES: usize = 8;

// Moore neighbourhood, clockwise on screen (y down) starting west.
const MOORE: [(i64, i64); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

fn moore_index(d: (i64, i64)) -> usize {
    MOORE.iter().position(|&m| m == d).expect("offset is a Moore neighbour")
}

/// Outer contour of the 8-connected region carrying `label`, as a closed loop
/// of pixel-centre coordinates (Moore-neighbour tracing with Jacob's stopping
/// criterion). Holes are ignored.
pub fn trace_boundary(mask: &LabelImage, label: u32) -> Result<Vec<Point>> {
    let (w, h) = (mask.width, mask.height);
    let fg: Vec<bool> = mask.data.iter().map(|&v| v == label).collect();
    let Some(first) = fg.iter().position(|&b| b) else {
        return Err(Error::NotFound(label));
    };
    let (_, components) = connected_components(w, h, &fg, true);
    if components > 1 {
        return Err(Error::AmbiguousRegion {
            label,
            components: components as usize,
        });
    }

    let is_fg = |c: i64, r: i64| mask.get_signed(c, r) == label;
    let start = ((first % w) as i64, (first / w) as i64);
    let mut cur = start;
    // The west neighbour of the first raster-order pixel is background.
    let mut back = 0usize;
    let mut first_move: Option<usize> = None;
    let mut loop_px = vec![start];

    loop {
        let step = (1..=8)
            .map(|k| (back + k) % 8)
            .find(|&d| is_fg(cur.0 + MOORE[d].0, cur.1 + MOORE[d].1));
        let Some(d) = step else {
            break; // isolated pixel
        };
        if cur == start {
            match first_move {
                Some(m) if m == d => {
                    loop_px.pop();
                    break;
                }
                None => first_move = Some(d),
                _ => {}
            }
        }
        let prev = MOORE[(d + 7) % 8];
        let next = (cur.0 + MOORE[d].0, cur.1 + MOORE[d].1);
        back = moore_index((prev.0 - MOORE[d].0, prev.1 - MOORE[d].1));
        cur = next;
        loop_px.push(cur);
        if loop_px.len() > 4 * w * h + 8 {
            return Err(Error::InvalidBoundary("contour tracing did not close".into()));
        }
    }

    if loop_px.len() < MIN_VERTICES {
        return Err(Error::TooSmall {
            vertices: loop_px.len(),
            min: MIN_VERTICES,
        });
    }
    Ok(loop_px
        .into_iter()
        .map(|(c, r)| Point::new((c + mask.origin_x) as f64, (r + mask.origin_y) as f64))
        .collect())
}

/// Shoelace signed area; positive for counter-clockwise loops.
pub fn signed_area(polygon: &[Point]) -> f64 {
    let n = polygon.len();
    0.5 * (0..n)
        .map(|i| polygon[i].cross(polygon[(i + 1) % n]))
        .sum::<f64>()
}

/// Counter-clockwise, approximately unit-spaced closed contour. Geometry only;
/// see [`ClosedBoundary`] for normals and curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub vertices: Vec<Point>,
    /// Arc length between consecutive vertices.
    pub spacing: f64,
}

impl Contour {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn perimeter(&self) -> f64 {
        perimeter(&self.vertices)
    }
}

fn perimeter(polygon: &[Point]) -> f64 {
    let n = polygon.len();
    (0..n).map(|i| polygon[i].distance(polygon[(i + 1) % n])).sum()
}

fn has_self_intersection(polygon: &[Point]) -> bool {
    let n = polygon.len();
    for i in 0..n {
        let a = Segment::new(polygon[i], polygon[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let b = Segment::new(polygon[j], polygon[(j + 1) % n]);
            if segments_properly_intersect(&a, &b) {
                return true;
            }
        }
    }
    false
}

/// Removes repeated vertices, forces counter-clockwise orientation and
/// resamples to `round(perimeter)` equally spaced vertices.
pub fn resample_and_orient(polygon: &[Point]) -> Result<Contour> {
    let mut pts: Vec<Point> = Vec::with_capacity(polygon.len());
    for &p in polygon {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    if pts.len() < MIN_VERTICES {
        return Err(Error::TooSmall {
            vertices: pts.len(),
            min: MIN_VERTICES,
        });
    }
    if has_self_intersection(&pts) {
        return Err(Error::InvalidBoundary("polygon intersects itself".into()));
    }
    let area = signed_area(&pts);
    if area == 0.0 {
        return Err(Error::InvalidBoundary("polygon has zero area".into()));
    }
    if area < 0.0 {
        pts.reverse();
    }

    let total = perimeter(&pts);
    let count = (total.round() as usize).max(MIN_VERTICES);
    let spacing = total / count as f64;
    let mut out = Vec::with_capacity(count);
    let mut seg = 0usize;
    let mut seg_start = 0.0;
    let mut seg_len = pts[0].distance(pts[1]);
    for k in 0..count {
        let target = k as f64 * spacing;
        while target > seg_start + seg_len && seg + 1 < pts.len() {
            seg_start += seg_len;
            seg += 1;
            seg_len = pts[seg].distance(pts[(seg + 1) % pts.len()]);
        }
        let t = if seg_len > 0.0 {
            ((target - seg_start) / seg_len).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(pts[seg].lerp(pts[(seg + 1) % pts.len()], t));
    }
    Ok(Contour {
        vertices: out,
        spacing,
    })
}

/// Parameters of the discrete curvature estimator (pixel units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureParams {
    /// Arc-length half-width of the turning-rate window.
    pub window: f64,
    /// Gaussian smoothing of the coordinates along arc length; 0 disables.
    pub smooth_sigma: f64,
}

impl Default for CurvatureParams {
    fn default() -> Self {
        Self {
            window: 5.0,
            smooth_sigma: 2.0,
        }
    }
}

/// Cyclic Gaussian smoothing of contour coordinates; `sigma` in samples.
fn smooth_closed(points: &[Point], sigma: f64) -> Vec<Point> {
    if sigma <= 0.0 {
        return points.to_vec();
    }
    let n = points.len() as i64;
    let radius = (3.0 * sigma).ceil() as i64;
    let weights: Vec<f64> = (-radius..=radius)
        .map(|k| (-(k * k) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    (0..n)
        .map(|i| {
            let mut acc = Point::ZERO;
            for (w, k) in weights.iter().zip(-radius..=radius) {
                acc += points[(i + k).rem_euclid(n) as usize] * *w;
            }
            acc / total
        })
        .collect()
}

fn central_tangent(points: &[Point], i: usize) -> Option<Point> {
    let n = points.len();
    (1..=3.min(n / 2)).find_map(|k| {
        let t = points[(i + k) % n] - points[(i + n - k) % n];
        (t.norm() > 1e-12).then_some(t)
    })
}

/// Inward unit normals: the left rotation of the central-difference tangent
/// of the (optionally smoothed) contour. Falls back to wider stencils on
/// coincident neighbours.
pub fn compute_normals(contour: &Contour, smooth_sigma: f64) -> Result<Vec<Point>> {
    let sigma = if contour.spacing > 0.0 {
        smooth_sigma / contour.spacing
    } else {
        0.0
    };
    let pts = smooth_closed(&contour.vertices, sigma);
    (0..pts.len())
        .map(|i| {
            let t = central_tangent(&pts, i).ok_or(Error::DegenerateVertex(i))?;
            let n = t.perp_left();
            Ok(n / n.norm())
        })
        .collect()
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a < -PI {
        a += 2.0 * PI;
    }
    a
}

/// Signed curvature, concave-positive: `-dθ/ds` of the smoothed tangent angle
/// over a `±window` arc.
pub fn compute_curvature(contour: &Contour, params: CurvatureParams) -> Result<Vec<f64>> {
    let n = contour.len();
    let spacing = contour.spacing.max(f64::MIN_POSITIVE);
    let half = ((params.window / spacing).round() as usize).max(1);
    let needed = 2 * half + 3;
    if n < needed {
        return Err(Error::BoundaryTooShort {
            vertices: n,
            needed,
        });
    }
    let pts = smooth_closed(&contour.vertices, params.smooth_sigma / spacing);
    let angles: Vec<f64> = (0..n)
        .map(|i| {
            let t = central_tangent(&pts, i).ok_or(Error::DegenerateVertex(i))?;
            Ok(t.y.atan2(t.x))
        })
        .collect::<Result<_>>()?;

    // prefix sums over k of turn(k -> k+1) and |s_{k+1} - s_k|, unrolled three times
    let mut turn = vec![0.0; 3 * n + 1];
    let mut arc = vec![0.0; 3 * n + 1];
    for k in 0..3 * n {
        let (a, b) = (k % n, (k + 1) % n);
        turn[k + 1] = turn[k] + wrap_angle(angles[b] - angles[a]);
        arc[k + 1] = arc[k] + pts[a].distance(pts[b]);
    }
    Ok((0..n)
        .map(|i| {
            let lo = i + n - half;
            let hi = i + n + half;
            let s = arc[hi] - arc[lo];
            if s > 0.0 {
                -(turn[hi] - turn[lo]) / s
            } else {
                0.0
            }
        })
        .collect())
}

/// Counter-clockwise closed boundary with per-vertex inward unit normals and
/// concave-positive curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedBoundary {
    vertices: Vec<Point>,
    normals: Vec<Point>,
    curvature: Vec<f64>,
    spacing: f64,
}

impl ClosedBoundary {
    /// Fills normals and curvature for a resampled contour.
    pub fn build(contour: Contour, params: CurvatureParams) -> Result<Self> {
        let normals = compute_normals(&contour, params.smooth_sigma)?;
        let curvature = compute_curvature(&contour, params)?;
        Ok(Self {
            vertices: contour.vertices,
            normals,
            curvature,
            spacing: contour.spacing,
        })
    }

    /// Resamples an arbitrary simple polygon and builds the boundary.
    pub fn from_polygon(polygon: &[Point], params: CurvatureParams) -> Result<Self> {
        Self::build(resample_and_orient(polygon)?, params)
    }

    /// Assembles a boundary from precomputed parts. Normals are renormalised;
    /// vertex spacing is taken as the mean edge length.
    pub fn from_parts(vertices: Vec<Point>, normals: Vec<Point>, curvature: Vec<f64>) -> Result<Self> {
        if vertices.len() < 3 || normals.len() != vertices.len() || curvature.len() != vertices.len() {
            return Err(Error::InvalidBoundary(
                "vertices, normals and curvature must have equal length >= 3".into(),
            ));
        }
        let normals = normals
            .into_iter()
            .enumerate()
            .map(|(i, n)| n.normalized().ok_or(Error::DegenerateVertex(i)))
            .collect::<Result<Vec<_>>>()?;
        let spacing = perimeter(&vertices) / vertices.len() as f64;
        Ok(Self {
            vertices,
            normals,
            curvature,
            spacing,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i]
    }

    #[inline]
    pub fn normal(&self, i: usize) -> Point {
        self.normals[i]
    }

    #[inline]
    pub fn curvature(&self, i: usize) -> f64 {
        self.curvature[i]
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn curvatures(&self) -> &[f64] {
        &self.curvature
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn perimeter(&self) -> f64 {
        perimeter(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// `∮ κ ds`; about `-2π` for a simple counter-clockwise loop.
    pub fn total_turning(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let ds = 0.5
                    * (self.vertices[i].distance(self.vertices[(i + 1) % n])
                        + self.vertices[i].distance(self.vertices[(i + n - 1) % n]));
                self.curvature[i] * ds
            })
            .sum()
    }

    /// Number of vertex steps between `i` and `j` the short way round.
    #[inline]
    pub fn cyclic_distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j);
        d.min(self.len() - d)
    }

    /// Vertex indices within arc distance `radius` of vertex `i`, from
    /// `i - r` to `i + r`. The whole loop (each index once) if it is shorter.
    pub fn neighborhood(&self, i: usize, radius: f64) -> Vec<usize> {
        let n = self.len();
        let r = (radius / self.spacing).round().max(0.0) as usize;
        if 2 * r + 1 >= n {
            return (0..n).map(|k| (i + k) % n).collect();
        }
        (0..=2 * r).map(|k| (i + n - r + k) % n).collect()
    }

    pub fn contains(&self, p: Point) -> bool {
        point_in_polygon(p, &self.vertices)
    }

    /// True iff `seg` properly crosses a boundary edge not incident to any
    /// vertex in `skip`.
    pub fn crosses(&self, seg: &Segment, skip: &[usize]) -> bool {
        segment_intersects_boundary(seg, &self.vertices, skip)
    }

    /// A chord between vertices `i` and `j` that stays inside the region:
    /// it crosses no boundary edge and its midpoint is interior.
    pub fn chord_is_interior(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let seg = Segment::new(self.vertices[i], self.vertices[j]);
        !self.crosses(&seg, &[i, j]) && self.contains(seg.midpoint())
    }

    /// A segment from vertex `i` to the interior point `p` that stays inside.
    pub fn spoke_is_interior(&self, i: usize, p: Point) -> bool {
        let seg = Segment::new(self.vertices[i], p);
        self.contains(p) && !self.crosses(&seg, &[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(r: f64, center: Point, n: usize) -> Vec<Point> {
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                center + Point::new(r * t.cos(), r * t.sin())
            })
            .collect()
    }

    fn disk_mask(r: f64, size: usize) -> LabelImage {
        let c = (size / 2) as f64;
        let mut m = LabelImage::new(size, size);
        for row in 0..size {
            for col in 0..size {
                if (col as f64 - c).hypot(row as f64 - c) <= r {
                    m.set(col, row, 1);
                }
            }
        }
        m
    }

    #[test]
    fn traces_square_block() {
        let mut m = LabelImage::new(5, 5);
        for r in 1..4 {
            for c in 1..4 {
                m.set(c, r, 3);
            }
        }
        let loop_px = trace_boundary(&m, 3).unwrap();
        assert_eq!(loop_px.len(), 8);
        assert!(!loop_px.contains(&Point::new(2.0, 2.0)));
    }

    #[test]
    fn trace_errors() {
        let mut m = LabelImage::new(6, 6);
        assert!(matches!(trace_boundary(&m, 1), Err(Error::NotFound(1))));
        m.set(2, 2, 1);
        assert!(matches!(trace_boundary(&m, 1), Err(Error::TooSmall { .. })));
        m.set(5, 5, 1);
        assert!(matches!(
            trace_boundary(&m, 1),
            Err(Error::AmbiguousRegion { components: 2, .. })
        ));
    }

    #[test]
    fn traced_disk_perimeter_close_to_circumference() {
        let m = disk_mask(20.0, 60);
        let loop_px = trace_boundary(&m, 1).unwrap();
        let p = perimeter(&loop_px);
        let expected = 2.0 * PI * 20.0;
        assert!((p - expected).abs() / expected < 0.05, "perimeter {p}");
    }

    #[test]
    fn clockwise_square_is_reoriented() {
        let cw = [
            Point::new(0.0, 0.0),
            Point::new(0.0, 5.0),
            Point::new(0.0, 10.0),
            Point::new(5.0, 10.0),
            Point::new(10.0, 10.0),
            Point::new(10.0, 5.0),
            Point::new(10.0, 0.0),
            Point::new(5.0, 0.0),
        ];
        let c = resample_and_orient(&cw).unwrap();
        assert_eq!(c.len(), 40);
        assert!(signed_area(&c.vertices) > 0.0);
        assert!((c.spacing - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_spaced_loop_is_unchanged() {
        let mut sq = Vec::new();
        for k in 0..10 {
            sq.push(Point::new(k as f64, 0.0));
        }
        for k in 0..10 {
            sq.push(Point::new(10.0, k as f64));
        }
        for k in 0..10 {
            sq.push(Point::new(10.0 - k as f64, 10.0));
        }
        for k in 0..10 {
            sq.push(Point::new(0.0, 10.0 - k as f64));
        }
        let c = resample_and_orient(&sq).unwrap();
        assert_eq!(c.len(), sq.len());
        for (a, b) in c.vertices.iter().zip(&sq) {
            assert!(a.distance(*b) < 1e-9);
        }
    }

    #[test]
    fn bow_tie_is_rejected() {
        let bow: Vec<Point> = [(0.0, 0.0), (4.0, 4.0), (8.0, 0.0), (8.0, 4.0), (4.0, 0.0), (0.0, 4.0), (-1.0, 2.0), (-0.5, 1.0)]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect();
        assert!(matches!(resample_and_orient(&bow), Err(Error::InvalidBoundary(_))));
    }

    #[test]
    fn ellipse_resampling_keeps_arc_length() {
        let ellipse: Vec<Point> = (0..720)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 720.0;
                Point::new(30.0 * t.cos(), 15.0 * t.sin())
            })
            .collect();
        let input = perimeter(&ellipse);
        let c = resample_and_orient(&ellipse).unwrap();
        assert!((c.perimeter() - input).abs() / input < 0.01);
    }

    #[test]
    fn square_bottom_edge_normal_points_up() {
        let sq = [
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 10.0),
            Point::new(0.0, 10.0),
        ];
        let mut dense = Vec::new();
        for k in 0..4 {
            let (a, b) = (sq[k], sq[(k + 1) % 4]);
            for s in 0..10 {
                dense.push(a.lerp(b, s as f64 / 10.0));
            }
        }
        let c = resample_and_orient(&dense).unwrap();
        let normals = compute_normals(&c, 0.0).unwrap();
        let mid = c.vertices.iter().position(|p| p.distance(Point::new(5.0, 0.0)) < 1e-9).unwrap();
        assert!(normals[mid].distance(Point::new(0.0, 1.0)) < 1e-12);
    }

    #[test]
    fn circle_normals_and_curvature() {
        let c = resample_and_orient(&circle(20.0, Point::ZERO, 500)).unwrap();
        let b = ClosedBoundary::build(c, CurvatureParams::default()).unwrap();
        let i = (0..b.len())
            .min_by(|&a, &bb| {
                b.vertex(a)
                    .distance(Point::new(20.0, 0.0))
                    .total_cmp(&b.vertex(bb).distance(Point::new(20.0, 0.0)))
            })
            .unwrap();
        assert!(b.normal(i).distance(Point::new(-1.0, 0.0)) < 0.05);
        for k in 0..b.len() {
            assert!((b.normal(k).norm() - 1.0).abs() < 1e-9);
            assert!(b.contains(b.vertex(k) + b.normal(k) * 0.5));
            assert!((b.curvature(k) + 0.05).abs() < 0.005, "kappa {}", b.curvature(k));
        }
        assert!((b.total_turning() + 2.0 * PI).abs() < 0.05 * 2.0 * PI);
    }

    #[test]
    fn short_boundary_rejected_by_curvature() {
        let c = resample_and_orient(&circle(1.5, Point::ZERO, 16)).unwrap();
        assert!(matches!(
            compute_curvature(&c, CurvatureParams::default()),
            Err(Error::BoundaryTooShort { .. })
        ));
    }

    #[test]
    fn neighborhood_wraps() {
        let c = resample_and_orient(&circle(20.0, Point::ZERO, 400)).unwrap();
        let b = ClosedBoundary::build(c, CurvatureParams::default()).unwrap();
        let nb = b.neighborhood(0, 7.0);
        assert_eq!(nb.len(), 15);
        assert_eq!(nb[7], 0);
        assert_eq!(nb[0], b.len() - 7);
    }
}
