//! Candidate partition segments.

use crate::geom::{ClosedBoundary, Point, Segment};

/// What a cut endpoint is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Anchor {
    /// Boundary vertex index.
    Vertex(usize),
    /// Added interior vertex at the centre of triangle `t` (index into the
    /// filtered triangle list).
    TriangleCenter(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutKind {
    VertexVertex,
    VertexCenter,
    CenterCenter,
}

impl CutKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CutKind::VertexVertex => "vertex-vertex",
            CutKind::VertexCenter => "vertex-center",
            CutKind::CenterCenter => "center-center",
        }
    }
}

/// The seed (vertex-vertex cuts) or triangle group (cuts to added vertices)
/// that produced a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Owner {
    Center(usize),
    Group(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub ends: [Anchor; 2],
    pub points: [Point; 2],
    pub owner: Owner,
}

impl Cut {
    pub fn vertex_vertex(boundary: &ClosedBoundary, i: usize, j: usize, owner: usize) -> Self {
        Self {
            ends: [Anchor::Vertex(i), Anchor::Vertex(j)],
            points: [boundary.vertex(i), boundary.vertex(j)],
            owner: Owner::Center(owner),
        }
    }

    /// Cut from boundary vertex `i` to the centre `center` of triangle `t`.
    pub fn vertex_center(boundary: &ClosedBoundary, i: usize, t: usize, center: Point, group: usize) -> Self {
        Self {
            ends: [Anchor::Vertex(i), Anchor::TriangleCenter(t)],
            points: [boundary.vertex(i), center],
            owner: Owner::Group(group),
        }
    }

    pub fn center_center(t: usize, a: Point, u: usize, b: Point, group: usize) -> Self {
        Self {
            ends: [Anchor::TriangleCenter(t), Anchor::TriangleCenter(u)],
            points: [a, b],
            owner: Owner::Group(group),
        }
    }

    pub fn kind(&self) -> CutKind {
        match self.ends {
            [Anchor::Vertex(_), Anchor::Vertex(_)] => CutKind::VertexVertex,
            [Anchor::TriangleCenter(_), Anchor::TriangleCenter(_)] => CutKind::CenterCenter,
            _ => CutKind::VertexCenter,
        }
    }

    pub fn segment(&self) -> Segment {
        Segment::new(self.points[0], self.points[1])
    }

    pub fn length(&self) -> f64 {
        self.points[0].distance(self.points[1])
    }

    /// Boundary vertex indices touched by this cut, paired with the point at
    /// the other end of the cut.
    pub fn vertex_incidences(&self) -> Vec<(usize, Point)> {
        let mut out = Vec::with_capacity(2);
        for k in 0..2 {
            if let Anchor::Vertex(i) = self.ends[k] {
                out.push((i, self.points[1 - k]));
            }
        }
        out
    }

    pub fn boundary_indices(&self) -> Vec<usize> {
        self.ends
            .iter()
            .filter_map(|a| match a {
                Anchor::Vertex(i) => Some(*i),
                Anchor::TriangleCenter(_) => None,
            })
            .collect()
    }

    /// Same unordered pair of anchors.
    pub fn same_ends(&self, other: &Cut) -> bool {
        self.ends == other.ends || self.ends == [other.ends[1], other.ends[0]]
    }

    /// Moves every endpoint anchored at triangle `t` to `center`.
    pub fn reanchor(&mut self, t: usize, center: Point) {
        for k in 0..2 {
            if self.ends[k] == Anchor::TriangleCenter(t) {
                self.points[k] = center;
            }
        }
    }

    /// Whether the cut stays inside the region and crosses no boundary edge
    /// away from its own anchors.
    pub fn is_interior(&self, boundary: &ClosedBoundary) -> bool {
        if self.points[0] == self.points[1] {
            return false;
        }
        let skip = self.boundary_indices();
        let seg = self.segment();
        !boundary.crosses(&seg, &skip) && boundary.contains(seg.midpoint())
    }
}
