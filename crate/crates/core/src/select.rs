//! Voting between vertex-vertex cuts and triangle-group cuts that compete
//! for the same part of the region.
//!
//! Each competing set is scored in four categories: boundary-normal
//! alignment, boundary curvature at the cut ends, image gradient along the
//! cuts and inverted intensity along the cuts. Per category the two scores
//! are divided by their mean; the set winning the majority of categories
//! wins, otherwise the larger normalised total, otherwise the vertex-vertex
//! set.

use crate::cut::{Cut, CutKind};
use crate::geom::{segment_crosses_triangle, segments_properly_intersect, ClosedBoundary, Point};
use crate::imaging::{sample_along_segment, ScalarField, SegmentSample};
use crate::vccut::GroupCuts;

/// Endpoints of different vertex-vertex cuts this close count once in the
/// curvature score.
pub const CURVATURE_DEDUP_DISTANCE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Direction,
    Curvature,
    Gradient,
    Inverted,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Direction,
        Category::Curvature,
        Category::Gradient,
        Category::Inverted,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Direction => "direction",
            Category::Curvature => "curvature",
            Category::Gradient => "gradient",
            Category::Inverted => "inverted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    VertexVertex,
    VertexCenter,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::VertexVertex => "vertex-vertex",
            Family::VertexCenter => "vertex-center",
        }
    }
}

/// Raw category scores of one cut set. Image categories are `None` when no
/// image was supplied.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SetScores {
    pub direction: f64,
    pub curvature: f64,
    pub gradient: Option<f64>,
    pub inverted: Option<f64>,
}

impl SetScores {
    pub fn get(&self, category: Category) -> Option<f64> {
        match category {
            Category::Direction => Some(self.direction),
            Category::Curvature => Some(self.curvature),
            Category::Gradient => self.gradient,
            Category::Inverted => self.inverted,
        }
    }
}

/// Image fields sampled along the cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteImages {
    pub gradient: ScalarField,
    pub inverted: ScalarField,
}

/// Mean of `n̂·ℓ̂` over every boundary vertex touched by the set, `ℓ` running
/// from the vertex along its cut. Zero for a set without boundary vertices.
pub fn score_direction<'a>(cuts: impl IntoIterator<Item = &'a Cut>, boundary: &ClosedBoundary) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for cut in cuts {
        for (i, other) in cut.vertex_incidences() {
            if let Some(dir) = (other - boundary.vertex(i)).normalized() {
                sum += boundary.normal(i).dot(dir);
                count += 1;
            }
        }
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Boundary vertices entering the curvature mean. A vertex-vertex endpoint
/// within [`CURVATURE_DEDUP_DISTANCE`] of an already kept endpoint of another
/// vertex-vertex cut is skipped.
pub fn curvature_vertices<'a>(cuts: impl IntoIterator<Item = &'a Cut>, boundary: &ClosedBoundary) -> Vec<usize> {
    let mut kept: Vec<(usize, usize, bool)> = Vec::new();
    for (c, cut) in cuts.into_iter().enumerate() {
        let vv = cut.kind() == CutKind::VertexVertex;
        for i in cut.boundary_indices() {
            let p = boundary.vertex(i);
            let duplicate = vv
                && kept.iter().any(|&(k, owner, kvv)| {
                    kvv && owner != c && boundary.vertex(k).distance(p) <= CURVATURE_DEDUP_DISTANCE
                });
            if !duplicate {
                kept.push((i, c, vv));
            }
        }
    }
    kept.into_iter().map(|(i, _, _)| i).collect()
}

/// Mean curvature over [`curvature_vertices`].
pub fn score_curvature<'a>(cuts: impl IntoIterator<Item = &'a Cut>, boundary: &ClosedBoundary) -> f64 {
    let verts = curvature_vertices(cuts, boundary);
    if verts.is_empty() {
        return 0.0;
    }
    verts.iter().map(|&i| boundary.curvature(i)).sum::<f64>() / verts.len() as f64
}

/// Samples pooled over every cut of the set.
pub fn sample_set<'a>(cuts: impl IntoIterator<Item = &'a Cut>, field: &ScalarField) -> SegmentSample {
    let mut acc = SegmentSample::default();
    for cut in cuts {
        acc.merge(sample_along_segment(field, &cut.segment()));
    }
    acc
}

/// All category scores of a set; the flag reports clamped image samples.
pub fn score_set(cuts: &[&Cut], boundary: &ClosedBoundary, images: Option<&VoteImages>) -> (SetScores, bool) {
    let mut scores = SetScores {
        direction: score_direction(cuts.iter().copied(), boundary),
        curvature: score_curvature(cuts.iter().copied(), boundary),
        gradient: None,
        inverted: None,
    };
    let mut clamped = false;
    if let Some(img) = images {
        let g = sample_set(cuts.iter().copied(), &img.gradient);
        let v = sample_set(cuts.iter().copied(), &img.inverted);
        scores.gradient = Some(g.mean());
        scores.inverted = Some(v.mean());
        clamped = g.clamped || v.clamped;
    }
    (scores, clamped)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CategoryVote {
    pub category: Category,
    /// `[vertex-vertex, vertex-center]`.
    pub raw: [f64; 2],
    pub normalized: [f64; 2],
    /// `None` on an exact tie.
    pub winner: Option<Family>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Majority,
    Cumulative,
    /// Nothing separated the sets; the vertex-vertex set is preferred.
    Tie,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Majority => "majority",
            Decision::Cumulative => "cumulative",
            Decision::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoteOutcome {
    pub winner: Family,
    pub decision: Decision,
    /// Categories that took part; both-zero and missing ones are left out.
    pub categories: Vec<CategoryVote>,
    /// Categories won, `[vertex-vertex, vertex-center]`.
    pub wins: [usize; 2],
    pub totals: [f64; 2],
}

fn normalize(vv: f64, vc: f64) -> [f64; 2] {
    let mean = 0.5 * (vv + vc);
    let scale = if mean != 0.0 {
        mean.abs()
    } else {
        0.5 * (vv.abs() + vc.abs())
    };
    [vv / scale, vc / scale]
}

/// Relative slack under which normalised totals count as equal.
const TOTAL_TIE_EPS: f64 = 1e-12;

/// Decides between the vertex-vertex (`vv`) and vertex-center (`vc`) sets.
pub fn vote(vv: &SetScores, vc: &SetScores) -> VoteOutcome {
    let mut categories = Vec::new();
    let mut wins = [0usize; 2];
    let mut totals = [0.0f64; 2];
    for category in Category::ALL {
        let (Some(a), Some(b)) = (vv.get(category), vc.get(category)) else {
            continue;
        };
        if a == 0.0 && b == 0.0 {
            continue;
        }
        let normalized = normalize(a, b);
        let winner = if normalized[0] > normalized[1] {
            wins[0] += 1;
            Some(Family::VertexVertex)
        } else if normalized[1] > normalized[0] {
            wins[1] += 1;
            Some(Family::VertexCenter)
        } else {
            None
        };
        totals[0] += normalized[0];
        totals[1] += normalized[1];
        categories.push(CategoryVote {
            category,
            raw: [a, b],
            normalized,
            winner,
        });
    }
    let threshold = (categories.len() + 2) / 2;
    let (winner, decision) = if !categories.is_empty() && wins[0] >= threshold {
        (Family::VertexVertex, Decision::Majority)
    } else if !categories.is_empty() && wins[1] >= threshold {
        (Family::VertexCenter, Decision::Majority)
    } else {
        let slack = TOTAL_TIE_EPS * (totals[0].abs() + totals[1].abs()).max(1.0);
        if totals[1] - totals[0] > slack {
            (Family::VertexCenter, Decision::Cumulative)
        } else if totals[0] - totals[1] > slack {
            (Family::VertexVertex, Decision::Cumulative)
        } else {
            (Family::VertexVertex, Decision::Tie)
        }
    };
    VoteOutcome {
        winner,
        decision,
        categories,
        wins,
        totals,
    }
}

/// A triangle group and the vertex-vertex cuts contesting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompetingPair {
    /// Index into the group list.
    pub group: usize,
    /// Indices into the vertex-vertex cut list, ascending.
    pub vv: Vec<usize>,
}

/// Whether a vertex-vertex cut contests a group: it properly crosses one of
/// the group's cuts or passes through one of its triangles.
pub fn contests(cut: &Cut, group: &GroupCuts, seeds: &[Point]) -> bool {
    let seg = cut.segment();
    group
        .cuts
        .iter()
        .any(|c| segments_properly_intersect(&seg, &c.segment()))
        || group
            .group
            .triangles
            .iter()
            .any(|t| segment_crosses_triangle(&seg, t.triangle.corners(seeds)))
}

/// Pairs every group with the vertex-vertex cuts contesting it. A cut
/// contesting several groups joins the first. Groups nobody contests are left
/// out.
pub fn find_competing_pairs(vv_cuts: &[Cut], groups: &[GroupCuts], seeds: &[Point]) -> Vec<CompetingPair> {
    let mut pairs: Vec<CompetingPair> = (0..groups.len())
        .map(|g| CompetingPair { group: g, vv: Vec::new() })
        .collect();
    for (k, cut) in vv_cuts.iter().enumerate() {
        if let Some(g) = groups.iter().position(|g| contests(cut, g, seeds)) {
            pairs[g].vv.push(k);
        }
    }
    pairs.retain(|p| !p.vv.is_empty());
    pairs
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairVote {
    pub pair: CompetingPair,
    pub vv_scores: SetScores,
    pub vc_scores: SetScores,
    pub outcome: VoteOutcome,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Selection {
    /// Surviving vertex-vertex cuts (indices), ascending.
    pub vv_kept: Vec<usize>,
    /// Surviving groups (indices), ascending.
    pub groups_kept: Vec<usize>,
    pub votes: Vec<PairVote>,
    pub clamped_samples: bool,
}

/// Votes every competing pair. Uncontested cuts and groups are kept.
pub fn select_cuts(
    vv_cuts: &[Cut],
    groups: &[GroupCuts],
    seeds: &[Point],
    boundary: &ClosedBoundary,
    images: Option<&VoteImages>,
) -> Selection {
    let pairs = find_competing_pairs(vv_cuts, groups, seeds);
    let mut vv_lost = vec![false; vv_cuts.len()];
    let mut group_lost = vec![false; groups.len()];
    let mut out = Selection::default();
    for pair in pairs {
        let vv_set: Vec<&Cut> = pair.vv.iter().map(|&k| &vv_cuts[k]).collect();
        let vc_set: Vec<&Cut> = groups[pair.group].cuts.iter().collect();
        let (vv_scores, c1) = score_set(&vv_set, boundary, images);
        let (vc_scores, c2) = score_set(&vc_set, boundary, images);
        out.clamped_samples |= c1 || c2;
        let outcome = vote(&vv_scores, &vc_scores);
        match outcome.winner {
            Family::VertexVertex => group_lost[pair.group] = true,
            Family::VertexCenter => pair.vv.iter().for_each(|&k| vv_lost[k] = true),
        }
        out.votes.push(PairVote {
            pair,
            vv_scores,
            vc_scores,
            outcome,
        });
    }
    out.vv_kept = (0..vv_cuts.len()).filter(|&k| !vv_lost[k]).collect();
    out.groups_kept = (0..groups.len()).filter(|&g| !group_lost[g]).collect();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::CurvatureParams;
    use std::f64::consts::PI;

    fn scores(d: f64, c: f64, g: f64, i: f64) -> SetScores {
        SetScores {
            direction: d,
            curvature: c,
            gradient: Some(g),
            inverted: Some(i),
        }
    }

    fn circle(r: f64) -> ClosedBoundary {
        let pts: Vec<Point> = (0..720)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 720.0;
                Point::new(r * t.cos(), r * t.sin())
            })
            .collect();
        ClosedBoundary::from_polygon(&pts, CurvatureParams::default()).unwrap()
    }

    /// Circle with exactly 360 unit-spaced vertices, vertex `k` at `k` degrees.
    fn degree_circle() -> ClosedBoundary {
        let b = circle(360.0 / (2.0 * PI));
        assert_eq!(b.len(), 360);
        b
    }

    fn nearest(b: &ClosedBoundary, p: Point) -> usize {
        (0..b.len())
            .min_by(|&i, &j| b.vertex(i).distance(p).total_cmp(&b.vertex(j).distance(p)))
            .unwrap()
    }

    #[test]
    fn sweep_wins() {
        let o = vote(&scores(1.0, 0.2, 3.0, 4.0), &scores(0.5, 0.1, 1.0, 2.0));
        assert_eq!((o.winner, o.decision, o.wins), (Family::VertexVertex, Decision::Majority, [4, 0]));
    }

    #[test]
    fn three_to_one() {
        let o = vote(&scores(1.0, 0.1, 1.0, 1.0), &scores(0.5, 0.2, 2.0, 2.0));
        assert_eq!((o.winner, o.wins), (Family::VertexCenter, [1, 3]));
    }

    #[test]
    fn split_goes_to_cumulative_total() {
        // normalised: direction 1.5/0.5, curvature 0.8/1.2, gradient 1.0+/...
        let o = vote(&scores(3.0, 2.0, 4.0, 1.0), &scores(1.0, 3.0, 6.0, 1.5));
        assert_eq!(o.wins, [1, 3]);
        let o = vote(&scores(3.0, 2.0, 4.0, 1.6), &scores(1.0, 3.0, 6.0, 1.5));
        assert_eq!(o.wins, [2, 2]);
        assert_eq!(o.decision, Decision::Cumulative);
        assert!(o.totals[0] > o.totals[1]);
        assert_eq!(o.winner, Family::VertexVertex);
    }

    #[test]
    fn all_ties_prefer_vertex_vertex() {
        let s = scores(0.7, 0.1, 2.0, 3.0);
        let o = vote(&s, &s);
        assert_eq!((o.winner, o.decision, o.wins), (Family::VertexVertex, Decision::Tie, [0, 0]));
    }

    #[test]
    fn zero_categories_are_skipped() {
        let o = vote(&scores(1.0, 0.0, 0.0, 2.0), &scores(0.5, 0.0, 0.0, 3.0));
        assert_eq!(o.categories.len(), 2);
        assert_eq!(o.decision, Decision::Cumulative);
        let o = vote(&scores(1.0, 0.0, 0.0, 3.0), &scores(0.5, 0.0, 0.0, 2.0));
        assert_eq!((o.winner, o.decision), (Family::VertexVertex, Decision::Majority));
    }

    #[test]
    fn normalised_scores_sum_to_two() {
        let n = normalize(0.3, 0.9);
        assert!((n[0] + n[1] - 2.0).abs() < 1e-15);
        let n = normalize(-0.05, -0.02);
        assert!(n[1] > n[0]);
    }

    #[test]
    fn without_image_only_two_categories() {
        let a = SetScores {
            direction: 0.9,
            curvature: 0.1,
            ..Default::default()
        };
        let b = SetScores {
            direction: 0.8,
            curvature: 0.3,
            ..Default::default()
        };
        let o = vote(&a, &b);
        assert_eq!(o.categories.len(), 2);
        assert_eq!(o.decision, Decision::Cumulative);
        assert_eq!(o.winner, Family::VertexCenter);
    }

    #[test]
    fn direction_of_diameter_is_one() {
        let b = degree_circle();
        let cut = Cut::vertex_vertex(&b, 0, 180, 0);
        assert!((score_direction([&cut], &b) - 1.0).abs() < 1e-6);
        // tangent direction at vertex 0 is (0, 1): perpendicular to the normal
        let tangent = Cut {
            ends: [crate::cut::Anchor::Vertex(0), crate::cut::Anchor::TriangleCenter(0)],
            points: [b.vertex(0), b.vertex(0) + Point::new(0.0, 5.0)],
            owner: crate::cut::Owner::Group(0),
        };
        assert!(score_direction([&tangent], &b).abs() < 1e-6);
    }

    #[test]
    fn close_endpoints_counted_once() {
        let b = degree_circle();
        let a = Cut::vertex_vertex(&b, 0, 180, 0);
        let c = Cut::vertex_vertex(&b, 1, 90, 1);
        assert!(b.vertex(0).distance(b.vertex(1)) <= 1.0);
        assert_eq!(curvature_vertices([&a, &c], &b), vec![0, 180, 90]);
        let k = score_curvature([&a, &c], &b);
        let expected = (b.curvature(0) + b.curvature(180) + b.curvature(90)) / 3.0;
        assert!((k - expected).abs() < 1e-15);
    }

    #[test]
    fn pooled_samples() {
        let values = (0..40 * 40).map(|i| (i % 40) as f64).collect();
        let field = ScalarField::new(40, 40, values, crate::imaging::FieldKind::GradientMagnitude).unwrap();
        let short = Cut {
            ends: [crate::cut::Anchor::Vertex(0), crate::cut::Anchor::Vertex(1)],
            points: [Point::new(1.0, 5.0), Point::new(3.0, 5.0)],
            owner: crate::cut::Owner::Center(0),
        };
        let long = Cut {
            points: [Point::new(10.0, 5.0), Point::new(30.0, 5.0)],
            ..short.clone()
        };
        let s = sample_set([&short, &long], &field);
        // 3 samples averaging 2, 21 samples averaging 20
        assert_eq!(s.count, 24);
        assert!((s.mean() - (3.0 * 2.0 + 21.0 * 20.0) / 24.0).abs() < 1e-12);
    }

    #[test]
    fn far_cut_is_not_paired() {
        let b = circle(40.0);
        let seeds = [Point::new(-10.0, 0.0), Point::new(10.0, 0.0), Point::new(0.0, 15.0)];
        let tri = crate::geom::delaunay(&seeds).unwrap();
        let vc = crate::vccut::build_vc_cuts(
            &b,
            &seeds,
            &tri,
            &crate::vccut::VcParams {
                angles: Default::default(),
                radius: 7.0,
                negative_factor: 5.0,
            },
        );
        assert_eq!(vc.groups.len(), 1);
        let at = |deg: f64| {
            let t = deg.to_radians();
            nearest(&b, Point::new(40.0 * t.cos(), 40.0 * t.sin()))
        };
        let across = Cut::vertex_vertex(&b, at(-90.0), at(90.0), 0);
        let far = Cut::vertex_vertex(&b, at(-60.0), at(-30.0), 1);
        let pairs = find_competing_pairs(&[across, far], &vc.groups, &seeds);
        assert_eq!(pairs, vec![CompetingPair { group: 0, vv: vec![0] }]);
    }
}
