//! Vertex-vertex cuts.
//!
//! The vertices assigned to one seed are split into pieces (maximal cyclic
//! runs), the pieces are chained into a well-oriented loop, and every jump
//! between consecutive vertices of that loop that is longer than a pixel
//! becomes a cut. Each cut is then moved within small boundary neighbourhoods
//! of its endpoints to favour short, normal-aligned cuts at concave vertices.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use crate::assign::Assignment;
use crate::cut::{Anchor, Cut};
use crate::geom::{segments_properly_intersect, ClosedBoundary, Point};

/// Consecutive vertices further apart than this are a gap. Diagonal steps of
/// an 8-connected contour are `√2` long and must not count.
pub const GAP_THRESHOLD: f64 = SQRT_2 + 1e-9;

/// A gap is only cut when the boundary arc it skips is at least this many
/// times the chord length.
pub const MIN_ARC_TO_CHORD: f64 = 1.5;

/// Maximal cyclic run of boundary vertices assigned to one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Piece {
    pub center: usize,
    /// First vertex index (in counter-clockwise order).
    pub start: usize,
    /// Last vertex index; `end < start` when the run wraps past index 0.
    pub end: usize,
    pub len: usize,
}

impl Piece {
    pub fn indices(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).map(move |k| (self.start + k) % n)
    }
}

/// Splits the assignment into pieces, grouped by seed index.
pub fn collect_pieces(assignment: &Assignment) -> BTreeMap<usize, Vec<Piece>> {
    let labels = &assignment.center;
    let n = labels.len();
    let mut out: BTreeMap<usize, Vec<Piece>> = BTreeMap::new();
    if n == 0 {
        return out;
    }
    let Some(first_break) = (0..n).find(|&i| labels[i] != labels[(i + n - 1) % n]) else {
        if let Some(c) = labels[0] {
            out.entry(c).or_default().push(Piece {
                center: c,
                start: 0,
                end: n - 1,
                len: n,
            });
        }
        return out;
    };
    let mut k = 0;
    while k < n {
        let start = (first_break + k) % n;
        let label = labels[start];
        let mut len = 1;
        while k + len < n && labels[(start + len) % n] == label {
            len += 1;
        }
        if let Some(c) = label {
            out.entry(c).or_default().push(Piece {
                center: c,
                start,
                end: (start + len - 1) % n,
                len,
            });
        }
        k += len;
    }
    for pieces in out.values_mut() {
        pieces.sort_by_key(|p| p.start);
    }
    out
}

/// Successor score of piece `m` after piece `k`:
/// `(n̂_e;k·ℓ̂ - n̂_s;m·ℓ̂) / |ℓ|` with `ℓ = v_s;m - v_e;k`.
pub fn succession_score(boundary: &ClosedBoundary, from: &Piece, to: &Piece) -> f64 {
    let l = boundary.vertex(to.start) - boundary.vertex(from.end);
    let d = l.norm();
    if d == 0.0 {
        return f64::INFINITY;
    }
    let u = l / d;
    (boundary.normal(from.end).dot(u) - boundary.normal(to.start).dot(u)) / d
}

/// Chains the pieces of one seed into a well-oriented loop.
///
/// The walk starts at the piece closest to the seed and repeatedly moves to
/// the best-scoring other piece within `r_max`, stopping when it would revisit
/// a piece or has nowhere to go. Unvisited pieces are left out.
pub fn order_pieces(pieces: &[Piece], center: Point, boundary: &ClosedBoundary, r_max: f64) -> Vec<Piece> {
    let n = boundary.len();
    let closest = |p: &Piece| {
        p.indices(n)
            .map(|i| boundary.vertex(i).distance(center))
            .fold(f64::INFINITY, f64::min)
    };
    let Some(first) = (0..pieces.len()).min_by(|&a, &b| closest(&pieces[a]).total_cmp(&closest(&pieces[b])))
    else {
        return Vec::new();
    };

    let mut visited = vec![first];
    let mut current = first;
    loop {
        let mut best: Option<(usize, f64)> = None;
        for (m, cand) in pieces.iter().enumerate() {
            if m == current {
                continue;
            }
            if boundary.vertex(cand.start).distance(boundary.vertex(pieces[current].end)) > r_max {
                continue;
            }
            let s = succession_score(boundary, &pieces[current], cand);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((m, s));
            }
        }
        match best {
            Some((m, _)) if !visited.contains(&m) => {
                visited.push(m);
                current = m;
            }
            _ => break,
        }
    }
    visited.into_iter().map(|k| pieces[k]).collect()
}

/// Emits a cut wherever consecutive vertices of the ordered loop are more than
/// [`GAP_THRESHOLD`] apart, including the closing jump from the last vertex
/// back to the first.
pub fn create_vv_cuts(ordered: &[Piece], boundary: &ClosedBoundary) -> Vec<Cut> {
    let n = boundary.len();
    let seq: Vec<(usize, usize)> = ordered
        .iter()
        .flat_map(|p| p.indices(n).map(move |i| (i, p.center)))
        .collect();
    let mut cuts: Vec<Cut> = Vec::new();
    if seq.len() < 2 {
        return cuts;
    }
    for k in 0..seq.len() {
        let (i, owner) = seq[k];
        let (j, _) = seq[(k + 1) % seq.len()];
        if i == j || boundary.vertex(i).distance(boundary.vertex(j)) <= GAP_THRESHOLD {
            continue;
        }
        let cut = Cut::vertex_vertex(boundary, i, j, owner);
        if !cuts.iter().any(|c| c.same_ends(&cut)) {
            cuts.push(cut);
        }
    }
    cuts
}

/// Whether a gap cut skips enough boundary to be a real partition rather than
/// a few stray unassigned vertices.
pub fn spans_meaningful_arc(boundary: &ClosedBoundary, i: usize, j: usize, radius: f64) -> bool {
    let arc = boundary.cyclic_distance(i, j) as f64 * boundary.spacing();
    let chord = boundary.vertex(i).distance(boundary.vertex(j));
    arc >= MIN_ARC_TO_CHORD * chord && arc > 2.0 * radius
}

#[inline]
pub(crate) fn scaled_curvature(k: f64, negative_factor: f64) -> f64 {
    if k < 0.0 {
        k * negative_factor
    } else {
        k
    }
}

/// Cut objective for vertices `i`, `j`:
/// `(n̂_i·ℓ̂ - n̂_j·ℓ̂ + κ'_i + κ'_j) / |ℓ|` with `ℓ = v_j - v_i` and negative
/// curvatures multiplied by `negative_factor`.
pub fn vv_objective(boundary: &ClosedBoundary, i: usize, j: usize, negative_factor: f64) -> f64 {
    let l = boundary.vertex(j) - boundary.vertex(i);
    let d = l.norm();
    if d == 0.0 {
        return f64::NEG_INFINITY;
    }
    let u = l / d;
    (boundary.normal(i).dot(u) - boundary.normal(j).dot(u)
        + scaled_curvature(boundary.curvature(i), negative_factor)
        + scaled_curvature(boundary.curvature(j), negative_factor))
        / d
}

/// Minimum vertex separation of an optimised cut: the two endpoint
/// neighbourhoods must not overlap.
pub fn min_separation(boundary: &ClosedBoundary, radius: f64) -> usize {
    2 * (radius / boundary.spacing()).round() as usize + 1
}

/// A candidate pair for an optimised cut.
pub fn vv_feasible(boundary: &ClosedBoundary, i: usize, j: usize, min_sep: usize) -> bool {
    i != j && boundary.cyclic_distance(i, j) >= min_sep && boundary.chord_is_interior(i, j)
}

fn vertex_ends(cut: &Cut) -> Option<(usize, usize)> {
    match cut.ends {
        [Anchor::Vertex(i), Anchor::Vertex(j)] => Some((i, j)),
        _ => None,
    }
}

/// Objective of an existing vertex-vertex cut.
pub fn cut_objective(cut: &Cut, boundary: &ClosedBoundary, negative_factor: f64) -> f64 {
    vertex_ends(cut).map_or(f64::NEG_INFINITY, |(i, j)| vv_objective(boundary, i, j, negative_factor))
}

/// Exhaustive search over the two endpoint neighbourhoods (arc radius
/// `radius`) for the feasible pair maximising [`vv_objective`]. The input
/// pair wins ties; if no pair is feasible the cut is returned unchanged.
pub fn optimize_vv_cut(cut: &Cut, boundary: &ClosedBoundary, radius: f64, negative_factor: f64) -> Cut {
    let Some((i0, j0)) = vertex_ends(cut) else {
        return cut.clone();
    };
    let near_i = boundary.neighborhood(i0, radius);
    let near_j = boundary.neighborhood(j0, radius);
    if near_i.len() == boundary.len() || near_i.iter().all(|v| near_j.contains(v)) {
        return cut.clone();
    }
    let min_sep = min_separation(boundary, radius);
    let mut best = if vv_feasible(boundary, i0, j0, min_sep) {
        Some((i0, j0, vv_objective(boundary, i0, j0, negative_factor)))
    } else {
        None
    };
    for &i in &near_i {
        for &j in &near_j {
            let value = vv_objective(boundary, i, j, negative_factor);
            if best.is_some_and(|(_, _, b)| value <= b) {
                continue;
            }
            if vv_feasible(boundary, i, j, min_sep) {
                best = Some((i, j, value));
            }
        }
    }
    match best {
        Some((i, j, _)) => Cut {
            ends: [Anchor::Vertex(i), Anchor::Vertex(j)],
            points: [boundary.vertex(i), boundary.vertex(j)],
            owner: cut.owner,
        },
        None => cut.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VvParams {
    pub r_max: f64,
    pub radius: f64,
    pub negative_factor: f64,
}

/// Everything the vertex-vertex stage produced for one clump.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VvOutcome {
    pub pieces: usize,
    pub dropped_pieces: usize,
    /// Gap cuts before pruning and optimisation.
    pub raw_cuts: Vec<Cut>,
    /// Gap cuts dropped because they skip too little boundary.
    pub short_gaps: usize,
    /// Cuts dropped for leaving the region, duplicating or crossing a better cut.
    pub rejected: usize,
    /// Final optimised cuts, sorted by anchor indices.
    pub cuts: Vec<Cut>,
}

fn near(boundary: &ClosedBoundary, a: usize, b: usize, steps: usize) -> bool {
    boundary.cyclic_distance(a, b) <= steps
}

/// Runs the whole vertex-vertex stage: pieces, ordering, gap cuts, pruning,
/// optimisation and de-duplication. Cuts from different seeds whose endpoints
/// lie within the optimisation radius of each other are treated as the same
/// cut (the better objective is kept); crossing cuts keep the better one.
pub fn build_vv_cuts(
    boundary: &ClosedBoundary,
    assignment: &Assignment,
    seeds: &[Point],
    params: &VvParams,
) -> VvOutcome {
    let mut out = VvOutcome::default();
    for (center, pieces) in collect_pieces(assignment) {
        out.pieces += pieces.len();
        let ordered = order_pieces(&pieces, seeds[center], boundary, params.r_max);
        out.dropped_pieces += pieces.len() - ordered.len();
        for cut in create_vv_cuts(&ordered, boundary) {
            if !out.raw_cuts.iter().any(|c| c.same_ends(&cut)) {
                out.raw_cuts.push(cut);
            }
        }
    }

    let mut scored: Vec<(Cut, f64)> = Vec::new();
    let min_sep = min_separation(boundary, params.radius);
    for cut in &out.raw_cuts {
        let (i, j) = vertex_ends(cut).expect("gap cuts join two vertices");
        if !spans_meaningful_arc(boundary, i, j, params.radius) {
            out.short_gaps += 1;
            continue;
        }
        let opt = optimize_vv_cut(cut, boundary, params.radius, params.negative_factor);
        let (p, q) = vertex_ends(&opt).unwrap();
        if !vv_feasible(boundary, p, q, min_sep) {
            out.rejected += 1;
            continue;
        }
        let value = vv_objective(boundary, p, q, params.negative_factor);
        scored.push((opt, value));
    }

    // best objective first; ties by anchor indices
    let key = |c: &Cut| {
        let (i, j) = vertex_ends(c).unwrap();
        (i.min(j), i.max(j))
    };
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| key(&a.0).cmp(&key(&b.0))));
    let steps = (params.radius / boundary.spacing()).round() as usize;
    let mut kept: Vec<Cut> = Vec::new();
    for (cut, _) in scored {
        let (i, j) = vertex_ends(&cut).unwrap();
        let duplicate = kept.iter().any(|k| {
            let (a, b) = vertex_ends(k).unwrap();
            (near(boundary, i, a, steps) && near(boundary, j, b, steps))
                || (near(boundary, i, b, steps) && near(boundary, j, a, steps))
        });
        let crossing = kept
            .iter()
            .any(|k| segments_properly_intersect(&k.segment(), &cut.segment()));
        if duplicate || crossing {
            out.rejected += 1;
        } else {
            kept.push(cut);
        }
    }
    kept.sort_by_key(|c| key(c));
    out.cuts = kept;
    out
}
