//! Vertex-center cuts for seeds that form triangles.
//!
//! Delaunay triangles of the seeds that stay inside the region and have no
//! extreme angle receive an added interior vertex. Each free edge of a
//! triangle gets a cut from that vertex out to the boundary; edges shared by
//! two triangles get a cut joining their added vertices.

use crate::cut::{Anchor, Cut};
use crate::geom::{ClosedBoundary, Point, Segment, Triangle};
use crate::vvcut::scaled_curvature;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleFilterParams {
    /// Smallest admissible interior angle, degrees.
    pub theta_min_deg: f64,
    /// Largest admissible interior angle, degrees.
    pub theta_max_deg: f64,
}

impl Default for AngleFilterParams {
    fn default() -> Self {
        Self {
            theta_min_deg: 20.0,
            theta_max_deg: 110.0,
        }
    }
}

/// Keeps triangles whose edges do not cross the boundary and whose interior
/// angles all lie in `[theta_min_deg, theta_max_deg]`.
pub fn filter_triangles(
    triangles: &[Triangle],
    seeds: &[Point],
    boundary: &ClosedBoundary,
    params: &AngleFilterParams,
) -> Vec<Triangle> {
    triangles
        .iter()
        .filter(|t| {
            let angles_ok = t
                .angles_deg(seeds)
                .iter()
                .all(|&a| a >= params.theta_min_deg && a <= params.theta_max_deg);
            angles_ok
                && (0..3).all(|k| {
                    let (a, b) = t.edge(k);
                    !boundary.crosses(&Segment::new(seeds[a], seeds[b]), &[])
                })
        })
        .copied()
        .collect()
}

/// A triangle inside a group, with its added vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupTriangle {
    /// Index into the filtered triangle list.
    pub index: usize,
    pub triangle: Triangle,
    pub center: Point,
    /// For edge `k`, the triangle (filtered-list index) sharing it.
    pub neighbors: [Option<usize>; 3],
}

impl GroupTriangle {
    pub fn is_shared(&self, k: usize) -> bool {
        self.neighbors[k].is_some()
    }
}

/// Triangles connected through shared edges.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleGroup {
    pub id: usize,
    pub triangles: Vec<GroupTriangle>,
    /// Set when some free edge found no boundary vertex to cut to.
    pub degenerate: bool,
}

impl TriangleGroup {
    pub fn triangle(&self, index: usize) -> Option<&GroupTriangle> {
        self.triangles.iter().find(|t| t.index == index)
    }

    pub fn shared_edges(&self) -> usize {
        self.triangles.iter().map(|t| t.neighbors.iter().flatten().count()).sum::<usize>() / 2
    }

    pub fn unshared_edges(&self) -> usize {
        3 * self.triangles.len() - 2 * self.shared_edges()
    }
}

fn same_edge(a: (usize, usize), b: (usize, usize)) -> bool {
    a == b || a == (b.1, b.0)
}

/// Connected components of the shared-edge relation. Added vertices start at
/// the triangle centroids. Groups are ordered by their lowest triangle index.
pub fn group_triangles(triangles: &[Triangle], seeds: &[Point]) -> Vec<TriangleGroup> {
    let n = triangles.len();
    let mut neighbors = vec![[None; 3]; n];
    for a in 0..n {
        for ka in 0..3 {
            for b in 0..n {
                if b != a && (0..3).any(|kb| same_edge(triangles[a].edge(ka), triangles[b].edge(kb))) {
                    neighbors[a][ka] = Some(b);
                }
            }
        }
    }
    let mut group_of = vec![usize::MAX; n];
    let mut groups = Vec::new();
    for start in 0..n {
        if group_of[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![start];
        group_of[start] = id;
        let mut k = 0;
        while k < members.len() {
            for nb in neighbors[members[k]].iter().flatten() {
                if group_of[*nb] == usize::MAX {
                    group_of[*nb] = id;
                    members.push(*nb);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        groups.push(TriangleGroup {
            id,
            triangles: members
                .into_iter()
                .map(|t| GroupTriangle {
                    index: t,
                    triangle: triangles[t],
                    center: triangles[t].centroid(seeds),
                    neighbors: neighbors[t],
                })
                .collect(),
            degenerate: false,
        });
    }
    groups
}

/// Midpoint and outward unit normal (pointing away from the centroid) of
/// edge `k`.
pub fn edge_frame(t: &GroupTriangle, k: usize, seeds: &[Point]) -> (Point, Point) {
    let (a, b) = t.triangle.edge(k);
    let (pa, pb) = (seeds[a], seeds[b]);
    let m = pa.midpoint(pb);
    let mut n = (pb - pa).perp_left().normalized().unwrap_or(Point::ZERO);
    if n.dot(t.triangle.centroid(seeds) - m) > 0.0 {
        n = -n;
    }
    (m, n)
}

/// Boundary vertex nearest to `m` on the outer side of the edge whose spoke
/// to `center` stays inside the region.
pub fn nearest_outward_vertex(boundary: &ClosedBoundary, m: Point, normal: Point, center: Point) -> Option<usize> {
    let mut candidates: Vec<(f64, usize)> = (0..boundary.len())
        .filter(|&i| (boundary.vertex(i) - m).dot(normal) > 0.0)
        .map(|i| (boundary.vertex(i).distance(m), i))
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    candidates
        .into_iter()
        .map(|(_, i)| i)
        .find(|&i| boundary.spoke_is_interior(i, center))
}

/// Forms the cuts of one group: a vertex-center cut per free edge and a
/// center-center cut per shared edge. Free edges with no usable boundary
/// vertex are skipped and mark the group degenerate.
pub fn create_vc_cuts(group: &mut TriangleGroup, seeds: &[Point], boundary: &ClosedBoundary) -> Vec<Cut> {
    let mut cuts = Vec::new();
    let mut degenerate = false;
    for t in &group.triangles {
        for k in 0..3 {
            match t.neighbors[k] {
                None => {
                    let (m, n) = edge_frame(t, k, seeds);
                    match nearest_outward_vertex(boundary, m, n, t.center) {
                        Some(p) => cuts.push(Cut::vertex_center(boundary, p, t.index, t.center, group.id)),
                        None => degenerate = true,
                    }
                }
                Some(u) if t.index < u => {
                    let other = group.triangle(u).expect("neighbour in the same group");
                    cuts.push(Cut::center_center(t.index, t.center, u, other.center, group.id));
                }
                Some(_) => {}
            }
        }
    }
    group.degenerate |= degenerate;
    cuts
}

/// `(n̂_i·ℓ̂ + κ'_i) / |ℓ|` with `ℓ = c - v_i`.
pub fn vc_vertex_objective(boundary: &ClosedBoundary, i: usize, center: Point, negative_factor: f64) -> f64 {
    let l = center - boundary.vertex(i);
    let d = l.norm();
    if d == 0.0 {
        return f64::NEG_INFINITY;
    }
    (boundary.normal(i).dot(l / d) + scaled_curvature(boundary.curvature(i), negative_factor)) / d
}

/// Moves the boundary end of a vertex-center cut to the vertex within arc
/// `radius` maximising [`vc_vertex_objective`] among those whose spoke stays
/// inside. The current vertex wins ties.
pub fn optimize_vc_vertex(cut: &Cut, boundary: &ClosedBoundary, radius: f64, negative_factor: f64) -> Cut {
    let (k, i0) = match cut.ends {
        [Anchor::Vertex(i), Anchor::TriangleCenter(_)] => (0, i),
        [Anchor::TriangleCenter(_), Anchor::Vertex(i)] => (1, i),
        _ => return cut.clone(),
    };
    let center = cut.points[1 - k];
    let mut best = boundary
        .spoke_is_interior(i0, center)
        .then(|| (i0, vc_vertex_objective(boundary, i0, center, negative_factor)));
    for i in boundary.neighborhood(i0, radius) {
        let value = vc_vertex_objective(boundary, i, center, negative_factor);
        if best.is_some_and(|(_, b)| value <= b) {
            continue;
        }
        if boundary.spoke_is_interior(i, center) {
            best = Some((i, value));
        }
    }
    let mut out = cut.clone();
    if let Some((i, _)) = best {
        out.ends[k] = Anchor::Vertex(i);
        out.points[k] = boundary.vertex(i);
    }
    out
}

/// `Σ n̂_i·ℓ̂_i / (Σ |ℓ_i| + Σ |x - m|)` with `ℓ_i = x - v_i` over the cut
/// vertices `v_i` and shared-edge midpoints `m`.
pub fn vc_center_objective(boundary: &ClosedBoundary, x: Point, vertices: &[usize], midpoints: &[Point]) -> f64 {
    let mut dots = 0.0;
    let mut lengths = 0.0;
    for &i in vertices {
        let l = x - boundary.vertex(i);
        let d = l.norm();
        if d == 0.0 {
            return f64::NEG_INFINITY;
        }
        dots += boundary.normal(i).dot(l / d);
        lengths += d;
    }
    lengths += midpoints.iter().map(|m| x.distance(*m)).sum::<f64>();
    if lengths == 0.0 {
        return f64::NEG_INFINITY;
    }
    dots / lengths
}

/// Candidate positions for an added vertex: the centroid plus every integer
/// pixel offset from it that lies strictly inside the medial triangle. The
/// centroid comes first.
pub fn center_search_region(triangle: &Triangle, seeds: &[Point]) -> Vec<Point> {
    let [a, b, c] = triangle.corners(seeds);
    let medial = [a.midpoint(b), b.midpoint(c), c.midpoint(a)];
    let centroid = triangle.centroid(seeds);
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in medial {
        lo_x = lo_x.min(p.x - centroid.x);
        hi_x = hi_x.max(p.x - centroid.x);
        lo_y = lo_y.min(p.y - centroid.y);
        hi_y = hi_y.max(p.y - centroid.y);
    }
    let mut out = vec![centroid];
    for dy in lo_y.floor() as i64..=hi_y.ceil() as i64 {
        for dx in lo_x.floor() as i64..=hi_x.ceil() as i64 {
            if dx == 0 && dy == 0 {
                continue;
            }
            let p = centroid + Point::new(dx as f64, dy as f64);
            if crate::geom::point_in_triangle(p, medial) {
                out.push(p);
            }
        }
    }
    out
}

/// Best added-vertex position for triangle `t` given the boundary vertices of
/// its vertex-center cuts. Candidates must lie inside the region with every
/// spoke inside too; the first candidate (centroid) wins ties and is kept when
/// nothing qualifies.
pub fn optimize_vc_center(t: &GroupTriangle, seeds: &[Point], cut_vertices: &[usize], boundary: &ClosedBoundary) -> Point {
    let midpoints: Vec<Point> = (0..3)
        .filter(|&k| t.is_shared(k))
        .map(|k| {
            let (a, b) = t.triangle.edge(k);
            seeds[a].midpoint(seeds[b])
        })
        .collect();
    let centroid = t.triangle.centroid(seeds);
    if cut_vertices.is_empty() {
        return centroid;
    }
    let mut best: Option<(Point, f64)> = None;
    for x in center_search_region(&t.triangle, seeds) {
        let value = vc_center_objective(boundary, x, cut_vertices, &midpoints);
        if best.is_some_and(|(_, b)| value <= b) {
            continue;
        }
        if boundary.contains(x) && cut_vertices.iter().all(|&i| boundary.spoke_is_interior(i, x)) {
            best = Some((x, value));
        }
    }
    best.map_or(centroid, |(x, _)| x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VcParams {
    pub angles: AngleFilterParams,
    pub radius: f64,
    pub negative_factor: f64,
}

/// Cuts of one triangle group after optimisation.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCuts {
    pub group: TriangleGroup,
    pub cuts: Vec<Cut>,
}

impl GroupCuts {
    pub fn added_vertices(&self) -> Vec<(usize, Point)> {
        self.group.triangles.iter().map(|t| (t.index, t.center)).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VcOutcome {
    pub triangulated: usize,
    pub triangles: Vec<Triangle>,
    pub groups: Vec<GroupCuts>,
}

/// Runs the whole vertex-center stage on already triangulated seeds: filter,
/// group, form cuts, optimise cut vertices, then optimise added vertices and
/// re-anchor their cuts. Groups that end up with no vertex-center cut are
/// dropped.
pub fn build_vc_cuts(
    boundary: &ClosedBoundary,
    seeds: &[Point],
    triangulation: &[Triangle],
    params: &VcParams,
) -> VcOutcome {
    let triangles = filter_triangles(triangulation, seeds, boundary, &params.angles);
    let mut groups = Vec::new();
    for mut group in group_triangles(&triangles, seeds) {
        let mut cuts: Vec<Cut> = create_vc_cuts(&mut group, seeds, boundary)
            .into_iter()
            .map(|c| optimize_vc_vertex(&c, boundary, params.radius, params.negative_factor))
            .collect();
        for t in group.triangles.iter_mut() {
            let verts: Vec<usize> = cuts
                .iter()
                .filter(|c| c.ends.contains(&Anchor::TriangleCenter(t.index)))
                .flat_map(|c| c.boundary_indices())
                .collect();
            t.center = optimize_vc_center(t, seeds, &verts, boundary);
        }
        for t in &group.triangles {
            for c in cuts.iter_mut() {
                c.reanchor(t.index, t.center);
            }
        }
        cuts.retain(|c| c.is_interior(boundary));
        if cuts.iter().any(|c| !c.boundary_indices().is_empty()) {
            groups.push(GroupCuts { group, cuts });
        }
    }
    VcOutcome {
        triangulated: triangulation.len(),
        triangles,
        groups,
    }
}
