//! Turning cuts into a labelled region raster.

use std::collections::BTreeMap;

use crate::cut::{Anchor, Cut};
use crate::geom::{point_in_polygon, Point, Segment};
use crate::raster::{connected_components, LabelImage};

/// How far separators reach past boundary anchors so they leave the region.
pub const SEPARATOR_OVERSHOOT: f64 = 2.5;

const N8: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

/// Pixel window a raster lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub origin_x: i64,
    pub origin_y: i64,
    pub width: usize,
    pub height: usize,
}

impl Frame {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            origin_x: 0,
            origin_y: 0,
            width,
            height,
        }
    }

    /// Smallest frame holding the polygon with one pixel of margin.
    pub fn around(polygon: &[Point]) -> Self {
        let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in polygon {
            lo_x = lo_x.min(p.x);
            lo_y = lo_y.min(p.y);
            hi_x = hi_x.max(p.x);
            hi_y = hi_y.max(p.y);
        }
        let (x0, y0) = (lo_x.floor() as i64 - 1, lo_y.floor() as i64 - 1);
        let (x1, y1) = (hi_x.ceil() as i64 + 1, hi_y.ceil() as i64 + 1);
        Self {
            origin_x: x0,
            origin_y: y0,
            width: (x1 - x0 + 1) as usize,
            height: (y1 - y0 + 1) as usize,
        }
    }

    pub fn of(image: &LabelImage) -> Self {
        Self {
            origin_x: image.origin_x,
            origin_y: image.origin_y,
            width: image.width,
            height: image.height,
        }
    }

    pub fn blank(&self) -> LabelImage {
        let mut out = LabelImage::new(self.width, self.height);
        out.origin_x = self.origin_x;
        out.origin_y = self.origin_y;
        out
    }

    /// Raster cell holding `p`, if inside the frame.
    pub fn cell(&self, p: Point) -> Option<(usize, usize)> {
        let c = (p.x + 0.5).floor() as i64 - self.origin_x;
        let r = (p.y + 0.5).floor() as i64 - self.origin_y;
        (c >= 0 && r >= 0 && (c as usize) < self.width && (r as usize) < self.height).then_some((c as usize, r as usize))
    }
}

fn distance_to_segment(p: Point, s: &Segment) -> f64 {
    let d = s.b - s.a;
    let len2 = d.dot(d);
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((p - s.a).dot(d) / len2).clamp(0.0, 1.0)
    };
    p.distance(s.a + d * t)
}

/// Pixels whose centre lies inside the polygon or within half a pixel of its
/// outline, labelled 1.
pub fn rasterize_polygon(polygon: &[Point], frame: Frame) -> LabelImage {
    let mut out = frame.blank();
    let n = polygon.len();
    let edges: Vec<Segment> = (0..n).map(|i| Segment::new(polygon[i], polygon[(i + 1) % n])).collect();
    for r in 0..frame.height {
        for c in 0..frame.width {
            let p = Point::new((c as i64 + frame.origin_x) as f64, (r as i64 + frame.origin_y) as f64);
            let near = || {
                edges.iter().any(|e| {
                    let (lo_x, hi_x) = (e.a.x.min(e.b.x) - 0.5, e.a.x.max(e.b.x) + 0.5);
                    let (lo_y, hi_y) = (e.a.y.min(e.b.y) - 0.5, e.a.y.max(e.b.y) + 0.5);
                    (lo_x..=hi_x).contains(&p.x) && (lo_y..=hi_y).contains(&p.y) && distance_to_segment(p, e) <= 0.5
                })
            };
            if point_in_polygon(p, polygon) || near() {
                out.set(c, r, 1);
            }
        }
    }
    out
}

/// Cells crossed by the segment, as a 4-connected chain from the cell of
/// `a` to the cell of `b`. Cell `(i, j)` covers `[i - 0.5, i + 0.5)`.
pub fn line_cells(a: Point, b: Point) -> Vec<(i64, i64)> {
    let cell = |v: f64| (v + 0.5).floor() as i64;
    let (mut cx, mut cy) = (cell(a.x), cell(a.y));
    let (ex, ey) = (cell(b.x), cell(b.y));
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let sx = if ex > cx { 1 } else { -1 };
    let sy = if ey > cy { 1 } else { -1 };
    let next_t = |c: i64, s: i64, origin: f64, d: f64| {
        if d == 0.0 {
            f64::INFINITY
        } else {
            ((c as f64 + 0.5 * s as f64) - origin) / d
        }
    };
    let mut tx = next_t(cx, sx, a.x, dx);
    let mut ty = next_t(cy, sy, a.y, dy);
    let mut out = vec![(cx, cy)];
    let steps = (ex - cx).abs() + (ey - cy).abs();
    for _ in 0..steps {
        let step_x = if cx == ex {
            false
        } else if cy == ey {
            true
        } else {
            tx <= ty
        };
        if step_x {
            cx += sx;
            tx = next_t(cx, sx, a.x, dx);
        } else {
            cy += sy;
            ty = next_t(cy, sy, a.y, dy);
        }
        out.push((cx, cy));
    }
    out
}

/// Separator endpoints: boundary anchors are pushed outwards along the cut.
fn separator_ends(cut: &Cut) -> (Point, Point) {
    let (mut a, mut b) = (cut.points[0], cut.points[1]);
    if let Some(dir) = (b - a).normalized() {
        if matches!(cut.ends[0], Anchor::Vertex(_)) {
            a = a - dir * SEPARATOR_OVERSHOOT;
        }
        if matches!(cut.ends[1], Anchor::Vertex(_)) {
            b += dir * SEPARATOR_OVERSHOOT;
        }
    }
    (a, b)
}

/// Splits `region` (non-zero pixels) along the cuts. Separator lines are
/// burnt in, the rest is labelled by 8-connectivity, and separator pixels
/// are then handed to neighbouring components by synchronous growth (lowest
/// label on ties). Labels follow raster order.
pub fn split_region(region: &LabelImage, cuts: &[Cut]) -> (LabelImage, u32) {
    let (w, h) = (region.width, region.height);
    let inside: Vec<bool> = region.data.iter().map(|&v| v != 0).collect();
    let mut open = inside.clone();
    for cut in cuts {
        let (a, b) = separator_ends(cut);
        for (x, y) in line_cells(a, b) {
            let (c, r) = (x - region.origin_x, y - region.origin_y);
            if c >= 0 && r >= 0 && (c as usize) < w && (r as usize) < h {
                open[r as usize * w + c as usize] = false;
            }
        }
    }
    let (mut labels, mut count) = connected_components(w, h, &open, true);
    if count == 0 {
        labels = inside.iter().map(|&b| u32::from(b)).collect();
        count = u32::from(inside.iter().any(|&b| b));
    }
    loop {
        let mut updates = Vec::new();
        for p in 0..w * h {
            if !inside[p] || labels[p] != 0 {
                continue;
            }
            let (c, r) = ((p % w) as i64, (p / w) as i64);
            let best = N8
                .iter()
                .filter_map(|&(dc, dr)| {
                    let (nc, nr) = (c + dc, r + dr);
                    (nc >= 0 && nr >= 0 && (nc as usize) < w && (nr as usize) < h)
                        .then(|| labels[nr as usize * w + nc as usize])
                })
                .filter(|&l| l != 0)
                .min();
            if let Some(l) = best {
                updates.push((p, l));
            }
        }
        if updates.is_empty() {
            break;
        }
        for (p, l) in updates {
            labels[p] = l;
        }
    }
    // region pieces covered entirely by separators become labels of their own
    let stranded: Vec<bool> = (0..w * h).map(|p| inside[p] && labels[p] == 0).collect();
    let (extra, n_extra) = connected_components(w, h, &stranded, true);
    for p in 0..w * h {
        if extra[p] != 0 {
            labels[p] = count + extra[p];
        }
    }
    count += n_extra;
    let mut out = region.clone();
    out.data = labels;
    (out, count)
}

/// Number of 4-adjacent pixel pairs between each pair of labels.
fn shared_borders(labels: &LabelImage) -> BTreeMap<(u32, u32), usize> {
    let mut out = BTreeMap::new();
    let (w, h) = (labels.width, labels.height);
    for r in 0..h {
        for c in 0..w {
            let a = labels.get(c, r);
            if a == 0 {
                continue;
            }
            for (nc, nr) in [(c + 1, r), (c, r + 1)] {
                if nc < w && nr < h {
                    let b = labels.get(nc, nr);
                    if b != 0 && b != a {
                        *out.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub label: u32,
    /// Seed indices inside the region, ascending.
    pub seeds: Vec<usize>,
    pub area: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    pub labels: LabelImage,
    pub regions: Vec<Region>,
    /// Seedless pieces folded into a neighbour.
    pub merged: usize,
}

/// Splits the region along the cuts, folds every seedless piece into the
/// neighbour it shares the longest border with (lowest label on ties), and
/// relabels so that label order follows the lowest seed index inside.
/// Seedless pieces with no neighbour keep their own label, after the seeded
/// ones.
pub fn apply_cuts_to_mask(region: &LabelImage, cuts: &[Cut], seeds: &[Point]) -> RegionMap {
    let (mut labels, _) = split_region(region, cuts);
    let frame = Frame::of(region);
    let seed_label = |labels: &LabelImage, s: Point| frame.cell(s).map_or(0, |(c, r)| labels.get(c, r));

    let mut merged = 0;
    loop {
        let seeded: Vec<u32> = seeds.iter().map(|&s| seed_label(&labels, s)).collect();
        let borders = shared_borders(&labels);
        let target = labels.labels().into_iter().filter(|l| !seeded.contains(l)).find_map(|l| {
            borders
                .iter()
                .filter_map(|(&(a, b), &n)| {
                    if a == l {
                        Some((b, n))
                    } else if b == l {
                        Some((a, n))
                    } else {
                        None
                    }
                })
                .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)))
                .map(|(into, _)| (l, into))
        });
        let Some((from, into)) = target else { break };
        for v in labels.data.iter_mut() {
            if *v == from {
                *v = into;
            }
        }
        merged += 1;
    }

    // order: lowest seed index inside, then raster position for seedless ones
    let mut first_pixel: BTreeMap<u32, usize> = BTreeMap::new();
    for (p, &v) in labels.data.iter().enumerate() {
        if v != 0 {
            first_pixel.entry(v).or_insert(p);
        }
    }
    let mut seeds_of: BTreeMap<u32, Vec<usize>> = first_pixel.keys().map(|&l| (l, Vec::new())).collect();
    for (k, &s) in seeds.iter().enumerate() {
        let l = seed_label(&labels, s);
        if l != 0 {
            seeds_of.get_mut(&l).expect("seed label present").push(k);
        }
    }
    let mut order: Vec<u32> = first_pixel.keys().copied().collect();
    order.sort_by_key(|l| match seeds_of[l].first() {
        Some(&k) => (0, k),
        None => (1, first_pixel[l]),
    });
    let remap: BTreeMap<u32, u32> = order.iter().enumerate().map(|(k, &l)| (l, k as u32 + 1)).collect();
    for v in labels.data.iter_mut() {
        if *v != 0 {
            *v = remap[v];
        }
    }
    let regions = order
        .iter()
        .map(|l| {
            let label = remap[l];
            Region {
                label,
                seeds: seeds_of[l].clone(),
                area: labels.count(label),
            }
        })
        .collect();
    RegionMap {
        labels,
        regions,
        merged,
    }
}
