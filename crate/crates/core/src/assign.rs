//! Assignment of boundary vertices to seed points.
//!
//! Every (vertex, seed) pair gets the score `(ℓ̂·n̂) / |ℓ|` where `ℓ` runs from
//! the vertex to the seed and `n̂` is the inward normal. Assignments are then
//! chosen greedily and crossing assignment segments are pruned until the
//! remaining set is crossing-free.

use crate::error::{Error, Result};
use crate::geom::{segments_properly_intersect, ClosedBoundary, Point, Segment};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssignParams {
    /// Maximum vertex-to-seed distance (px).
    pub r_max: f64,
    /// Minimum `ℓ̂·n̂` for a valid assignment.
    pub theta_min: f64,
}

impl Default for AssignParams {
    fn default() -> Self {
        Self {
            r_max: 35.0,
            theta_min: 0.5,
        }
    }
}

/// Score of assigning vertex `v` with inward normal `n` to seed `c`.
/// Returns `(score, ℓ̂·n̂, |ℓ|)`.
pub fn assignment_score(v: Point, n: Point, c: Point) -> (f64, f64, f64) {
    let l = c - v;
    let d = l.norm();
    if d == 0.0 {
        return (f64::INFINITY, 1.0, 0.0);
    }
    let dot = (l / d).dot(n);
    (dot / d, dot, d)
}

/// Dense `vertices x seeds` score matrix with validity flags.
#[derive(Debug, Clone)]
pub struct AssignmentScores {
    n_vertices: usize,
    n_centers: usize,
    scores: Vec<f64>,
    valid: Vec<bool>,
    origins: Vec<Point>,
    centers: Vec<Point>,
}

impl AssignmentScores {
    #[inline]
    pub fn score(&self, i: usize, j: usize) -> f64 {
        self.scores[i * self.n_centers + j]
    }

    #[inline]
    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        self.valid[i * self.n_centers + j]
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_centers(&self) -> usize {
        self.n_centers
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn origins(&self) -> &[Point] {
        &self.origins
    }
}

/// Scores every (vertex, seed) pair. A pair is invalid when `ℓ̂·n̂ < θ_min`,
/// `|ℓ| > R_max`, or the segment from vertex to seed crosses the boundary.
pub fn score_matrix(boundary: &ClosedBoundary, seeds: &[Point], params: &AssignParams) -> Result<AssignmentScores> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    let (nv, nc) = (boundary.len(), seeds.len());
    let mut scores = vec![0.0; nv * nc];
    let mut valid = vec![false; nv * nc];
    for i in 0..nv {
        let v = boundary.vertex(i);
        for (j, &c) in seeds.iter().enumerate() {
            let (s, dot, dist) = assignment_score(v, boundary.normal(i), c);
            scores[i * nc + j] = s;
            valid[i * nc + j] = dist > 0.0
                && dot >= params.theta_min
                && dist <= params.r_max
                && !boundary.crosses(&Segment::new(v, c), &[i]);
        }
    }
    Ok(AssignmentScores {
        n_vertices: nv,
        n_centers: nc,
        scores,
        valid,
        origins: boundary.vertices().to_vec(),
        centers: seeds.to_vec(),
    })
}

/// Final per-vertex assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Assigned seed index per vertex; `None` when unassigned.
    pub center: Vec<Option<usize>>,
    /// Winning score per vertex (0 when unassigned).
    pub score: Vec<f64>,
    /// Assignment vector `c - v` per vertex (zero when unassigned).
    pub vector: Vec<Point>,
    /// Number of outer passes of the algorithm.
    pub passes: usize,
}

impl Assignment {
    pub fn segment(&self, origins: &[Point], i: usize) -> Option<Segment> {
        self.center[i].map(|_| Segment::new(origins[i], origins[i] + self.vector[i]))
    }

    pub fn assigned_count(&self) -> usize {
        self.center.iter().flatten().count()
    }
}

/// Runs the iterative assignment:
///
/// 1. each vertex takes the valid seed with the largest score;
/// 2. while assignment segments cross, the vertex with the smallest
///    `Σ_{k∈K_i} s_i/s_k` over its crossing partners `K_i` is dropped
///    (ties: lowest vertex index);
/// 3. if anything was dropped, those (vertex, seed) entries become invalid
///    and the loop restarts at 1.
pub fn assign_vertices(scores: &AssignmentScores) -> Assignment {
    let (nv, nc) = (scores.n_vertices, scores.n_centers);
    let mut valid = scores.valid.clone();
    let mut passes = 0;
    loop {
        passes += 1;
        let mut center = vec![None; nv];
        let mut best = vec![0.0; nv];
        for i in 0..nv {
            for j in 0..nc {
                let s = scores.scores[i * nc + j];
                if valid[i * nc + j] && (center[i].is_none() || s > best[i]) {
                    center[i] = Some(j);
                    best[i] = s;
                }
            }
        }

        let removed = remove_crossings(scores, &center, &best);
        if removed.is_empty() {
            let vector = (0..nv)
                .map(|i| match center[i] {
                    Some(j) => scores.centers[j] - scores.origins[i],
                    None => Point::ZERO,
                })
                .collect();
            return Assignment {
                center,
                score: best,
                vector,
                passes,
            };
        }
        for i in removed {
            let j = center[i].expect("removed vertices were assigned");
            valid[i * nc + j] = false;
        }
    }
}

fn remove_crossings(scores: &AssignmentScores, center: &[Option<usize>], best: &[f64]) -> Vec<usize> {
    let active_idx: Vec<usize> = (0..center.len()).filter(|&i| center[i].is_some()).collect();
    let segs: Vec<Segment> = active_idx
        .iter()
        .map(|&i| Segment::new(scores.origins[i], scores.centers[center[i].unwrap()]))
        .collect();
    let m = active_idx.len();
    let mut partners: Vec<Vec<usize>> = vec![Vec::new(); m];
    for a in 0..m {
        for b in a + 1..m {
            if segments_properly_intersect(&segs[a], &segs[b]) {
                partners[a].push(b);
                partners[b].push(a);
            }
        }
    }

    let mut alive = vec![true; m];
    let mut removed = Vec::new();
    loop {
        let mut pick: Option<(usize, f64)> = None;
        for a in 0..m {
            if !alive[a] {
                continue;
            }
            let mut crossing = false;
            let mut weight = 0.0;
            for &b in &partners[a] {
                if alive[b] {
                    crossing = true;
                    weight += best[active_idx[a]] / best[active_idx[b]].max(f64::MIN_POSITIVE);
                }
            }
            if crossing && pick.is_none_or(|(_, w)| weight < w) {
                pick = Some((a, weight));
            }
        }
        match pick {
            Some((a, _)) => {
                alive[a] = false;
                removed.push(active_idx[a]);
            }
            None => break,
        }
    }
    removed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{ClosedBoundary, CurvatureParams};
    use std::f64::consts::PI;

    fn disk(r: f64, n: usize) -> ClosedBoundary {
        let pts: Vec<Point> = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point::new(r * t.cos(), r * t.sin())
            })
            .collect();
        ClosedBoundary::from_polygon(&pts, CurvatureParams::default()).unwrap()
    }

    #[test]
    fn score_of_aligned_pair() {
        let (s, dot, d) = assignment_score(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(10.0, 0.0));
        assert!((s - 0.1).abs() < 1e-15);
        assert_eq!((dot, d), (1.0, 10.0));
    }

    #[test]
    fn thresholds_invalidate() {
        // square boundary: vertex 0 at (0,0) with normal (1,0)
        let verts = vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, -60.0),
            Point::new(60.0, -60.0),
            Point::new(60.0, 60.0),
            Point::new(0.0, 60.0),
        ];
        let normals = vec![Point::new(1.0, 0.0); 5];
        let b = ClosedBoundary::from_parts(verts, normals, vec![0.0; 5]).unwrap();
        let dot04 = Point::new(0.4, (1.0f64 - 0.16).sqrt()) * 10.0;
        let seeds = [Point::new(10.0, 0.0), dot04, Point::new(40.0, 0.0)];
        let s = score_matrix(&b, &seeds, &AssignParams::default()).unwrap();
        assert!(s.is_valid(0, 0));
        assert!((s.score(0, 0) - 0.1).abs() < 1e-15);
        assert!(!s.is_valid(0, 1), "dot 0.4 < theta_min 0.5");
        assert!(!s.is_valid(0, 2), "distance 40 > R_max 35");
    }

    #[test]
    fn empty_seeds_rejected() {
        assert!(matches!(
            score_matrix(&disk(10.0, 100), &[], &AssignParams::default()),
            Err(Error::EmptySeeds)
        ));
    }

    #[test]
    fn single_seed_takes_every_vertex() {
        let b = disk(15.0, 200);
        let s = score_matrix(&b, &[Point::new(0.0, 0.0)], &AssignParams::default()).unwrap();
        let a = assign_vertices(&s);
        assert_eq!(a.assigned_count(), b.len());
        assert_eq!(a.passes, 1);
    }

    #[test]
    fn far_seed_leaves_vertices_unassigned() {
        let b = disk(15.0, 200);
        let params = AssignParams { r_max: 14.0, theta_min: 0.5 };
        let s = score_matrix(&b, &[Point::new(0.0, 0.0)], &params).unwrap();
        let a = assign_vertices(&s);
        assert_eq!(a.assigned_count(), 0);
    }

    #[test]
    fn crossing_pair_loses_weaker_segment() {
        // vertices 0 and 1 sit at the bottom of a notch and face each other's seed
        let verts = vec![
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(20.0, -20.0),
            Point::new(20.0, 40.0),
            Point::new(-10.0, 40.0),
            Point::new(-10.0, -20.0),
        ];
        let normals = vec![
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
            Point::new(-1.0, 0.0),
            Point::new(0.0, -1.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.0),
        ];
        let b = ClosedBoundary::from_parts(verts, normals, vec![0.0; 6]).unwrap();
        let seeds = [Point::new(7.5, 7.5), Point::new(2.0, 8.0)];
        let params = AssignParams { r_max: 15.0, theta_min: 0.9 };
        let s = score_matrix(&b, &seeds, &params).unwrap();
        assert!(s.is_valid(0, 0) && !s.is_valid(0, 1));
        assert!(s.is_valid(1, 1) && !s.is_valid(1, 0));
        assert!(segments_properly_intersect(
            &Segment::new(b.vertex(0), seeds[0]),
            &Segment::new(b.vertex(1), seeds[1])
        ));
        // s_0 = 1/|(7.5,7.5)| > s_1 = 1/|(-8,8)|, so vertex 1 has the smaller weight
        let a = assign_vertices(&s);
        assert_eq!(a.center[0], Some(0));
        assert_eq!(a.center[1], None);
        assert_eq!(a.passes, 2);
        let segs: Vec<Segment> = (0..b.len()).filter_map(|i| a.segment(b.vertices(), i)).collect();
        for x in 0..segs.len() {
            for y in x + 1..segs.len() {
                assert!(!segments_properly_intersect(&segs[x], &segs[y]));
            }
        }
    }

    #[test]
    fn equal_weights_drop_lower_vertex() {
        let verts = vec![
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(20.0, -20.0),
            Point::new(20.0, 40.0),
            Point::new(-10.0, 40.0),
            Point::new(-10.0, -20.0),
        ];
        let mut normals = vec![Point::new(1.0, 0.0); 6];
        normals[0] = Point::new(1.0, 1.0);
        normals[1] = Point::new(-1.0, 1.0);
        let b = ClosedBoundary::from_parts(verts, normals, vec![0.0; 6]).unwrap();
        let seeds = [Point::new(8.0, 8.0), Point::new(2.0, 8.0)];
        let s = score_matrix(&b, &seeds, &AssignParams { r_max: 15.0, theta_min: 0.9 }).unwrap();
        let a = assign_vertices(&s);
        assert_eq!(a.center[0], None);
        assert_eq!(a.center[1], Some(1));
    }
}
