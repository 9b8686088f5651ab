//! Independent reference implementations used to check the library.
//! Plain floating point throughout; inputs are random so exact degeneracies
//! do not occur.

#![allow(dead_code)]

use std::f64::consts::PI;

use declump::geom::CurvatureParams;
use declump::{ClosedBoundary, Point};
use rand::Rng;

pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

pub fn proper_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

pub fn inside(p: Point, poly: &[Point]) -> bool {
    let mut c = false;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if (a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y) {
            c = !c;
        }
    }
    c
}

/// Does segment `a`-`b` cross a polygon edge not touching a vertex in `skip`?
pub fn hits_boundary(a: Point, b: Point, poly: &[Point], skip: &[usize]) -> bool {
    let n = poly.len();
    (0..n).any(|k| {
        let k1 = (k + 1) % n;
        !skip.contains(&k) && !skip.contains(&k1) && proper_cross(a, b, poly[k], poly[k1])
    })
}

/// Smooth random star-shaped outline around `center` with mean radius `r`.
pub fn random_star(rng: &mut impl Rng, center: Point, r: f64, samples: usize) -> Vec<Point> {
    let terms: Vec<(f64, f64, f64)> = (2..6)
        .map(|k| (k as f64, rng.random_range(0.0..0.08) * r, rng.random_range(0.0..2.0 * PI)))
        .collect();
    (0..samples)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / samples as f64;
            let rad = r + terms.iter().map(|(k, a, p)| a * (k * t + p).cos()).sum::<f64>();
            center + Point::new(rad * t.cos(), rad * t.sin())
        })
        .collect()
}

/// A resampled boundary whose curvature values are replaced by random ones
/// in `[-0.3, 0.3]`, so both signs reach the objectives.
pub fn random_boundary(rng: &mut impl Rng, r: f64) -> ClosedBoundary {
    let poly = random_star(rng, Point::ZERO, r, 400);
    let b = ClosedBoundary::from_polygon(&poly, CurvatureParams::default()).unwrap();
    let kappa = (0..b.len()).map(|_| rng.random_range(-0.3..0.3)).collect();
    ClosedBoundary::from_parts(b.vertices().to_vec(), b.normals().to_vec(), kappa).unwrap()
}

pub fn scaled(k: f64, negative_factor: f64) -> f64 {
    if k < 0.0 {
        negative_factor * k
    } else {
        k
    }
}

/// Indices at most `steps` vertex steps from `i` around a loop of `n`.
pub fn within(n: usize, i: usize, steps: usize) -> Vec<usize> {
    (0..n)
        .filter(|&j| {
            let d = i.abs_diff(j);
            d.min(n - d) <= steps
        })
        .collect()
}

pub fn steps(b: &ClosedBoundary, radius: f64) -> usize {
    (radius / b.spacing()).round() as usize
}

pub fn circumcircle(a: Point, b: Point, c: Point) -> (Point, f64) {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    let (a2, b2, c2) = (a.dot(a), b.dot(b), c.dot(c));
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    let u = Point::new(ux, uy);
    (u, u.distance(a))
}

/// Interior angles in degrees by the law of cosines.
pub fn angles(p: [Point; 3]) -> [f64; 3] {
    let side = |i: usize, j: usize| p[i].distance(p[j]);
    let (a, b, c) = (side(1, 2), side(0, 2), side(0, 1));
    let ang = |opp: f64, x: f64, y: f64| ((x * x + y * y - opp * opp) / (2.0 * x * y)).clamp(-1.0, 1.0).acos().to_degrees();
    [ang(a, b, c), ang(b, a, c), ang(c, a, b)]
}
