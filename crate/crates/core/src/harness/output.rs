//! Result documents: the JSON cut list and the SVG overlay.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cut::{Anchor, CutKind, Owner};
use crate::geom::Point;
use crate::pipeline::{Diagnostics, PartitionResult};
use crate::select::{Category, PairVote};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchorDoc {
    /// `"vertex"` or `"center"`.
    pub kind: &'static str,
    /// Boundary vertex index or triangle index.
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OwnerDoc {
    /// `"seed"` or `"group"`.
    pub kind: &'static str,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutDoc {
    pub kind: &'static str,
    pub endpoints: [[f64; 2]; 2],
    pub anchors: [AnchorDoc; 2],
    pub boundary_indices: Vec<usize>,
    pub owner: OwnerDoc,
    /// Index into `votes` when the cut took part in a vote.
    pub vote: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryDoc {
    pub category: &'static str,
    pub vertex_vertex: f64,
    pub vertex_center: f64,
    pub vertex_vertex_normalized: f64,
    pub vertex_center_normalized: f64,
    pub winner: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoteDoc {
    pub group: usize,
    pub vertex_vertex_cuts: usize,
    pub winner: &'static str,
    pub decision: &'static str,
    pub wins: [usize; 2],
    pub totals: [f64; 2],
    pub categories: Vec<CategoryDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionDoc {
    pub label: u32,
    pub seeds: Vec<usize>,
    pub area: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsDoc {
    pub assignment_passes: usize,
    pub unassigned_vertices: usize,
    pub pieces: usize,
    pub dropped_pieces: usize,
    pub short_gaps: usize,
    pub rejected_vv_cuts: usize,
    pub triangles: usize,
    pub filtered_triangles: usize,
    pub degenerate_groups: usize,
    pub discarded_cuts: usize,
    pub merged_regions: usize,
    pub clamped_samples: bool,
}

impl From<&Diagnostics> for DiagnosticsDoc {
    fn from(d: &Diagnostics) -> Self {
        Self {
            assignment_passes: d.assignment_passes,
            unassigned_vertices: d.unassigned_vertices,
            pieces: d.pieces,
            dropped_pieces: d.dropped_pieces,
            short_gaps: d.short_gaps,
            rejected_vv_cuts: d.rejected_vv_cuts,
            triangles: d.triangles,
            filtered_triangles: d.filtered_triangles,
            degenerate_groups: d.degenerate_groups,
            discarded_cuts: d.discarded_cuts,
            merged_regions: d.merged_regions,
            clamped_samples: d.clamped_samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutsDocument {
    pub boundary_vertices: usize,
    pub cuts: Vec<CutDoc>,
    pub added_vertices: Vec<[f64; 2]>,
    pub regions: Vec<RegionDoc>,
    pub votes: Vec<VoteDoc>,
    pub diagnostics: DiagnosticsDoc,
}

fn anchor_doc(a: Anchor) -> AnchorDoc {
    match a {
        Anchor::Vertex(i) => AnchorDoc {
            kind: "vertex",
            index: i,
        },
        Anchor::TriangleCenter(t) => AnchorDoc {
            kind: "center",
            index: t,
        },
    }
}

fn vote_doc(v: &PairVote) -> VoteDoc {
    VoteDoc {
        group: v.pair.group,
        vertex_vertex_cuts: v.pair.vv.len(),
        winner: v.outcome.winner.as_str(),
        decision: v.outcome.decision.as_str(),
        wins: v.outcome.wins,
        totals: v.outcome.totals,
        categories: v
            .outcome
            .categories
            .iter()
            .map(|c| CategoryDoc {
                category: Category::as_str(c.category),
                vertex_vertex: c.raw[0],
                vertex_center: c.raw[1],
                vertex_vertex_normalized: c.normalized[0],
                vertex_center_normalized: c.normalized[1],
                winner: c.winner.map(|w| w.as_str()),
            })
            .collect(),
    }
}

impl CutsDocument {
    pub fn new(result: &PartitionResult) -> Self {
        Self {
            boundary_vertices: result.boundary.len(),
            cuts: result
                .cuts
                .iter()
                .map(|c| CutDoc {
                    kind: c.cut.kind().as_str(),
                    endpoints: c.cut.points.map(|p| p.to_array()),
                    anchors: c.cut.ends.map(anchor_doc),
                    boundary_indices: c.cut.boundary_indices(),
                    owner: match c.cut.owner {
                        Owner::Center(k) => OwnerDoc {
                            kind: "seed",
                            index: k,
                        },
                        Owner::Group(g) => OwnerDoc {
                            kind: "group",
                            index: g,
                        },
                    },
                    vote: c.vote,
                })
                .collect(),
            added_vertices: result.added_vertices.iter().map(|p| p.to_array()).collect(),
            regions: result
                .regions
                .iter()
                .map(|r| RegionDoc {
                    label: r.label,
                    seeds: r.seeds.clone(),
                    area: r.area,
                })
                .collect(),
            votes: result.diagnostics.votes.iter().map(vote_doc).collect(),
            diagnostics: (&result.diagnostics).into(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serialises");
        s.push('\n');
        s
    }
}

fn pt(p: Point) -> String {
    format!("{:.2},{:.2}", p.x, p.y)
}

/// SVG overlay in raster coordinates: boundary, cuts by family, seeds and
/// added vertices. Coordinates are printed with two decimals so the output
/// is byte-stable.
pub fn render_svg(result: &PartitionResult, seeds: &[Point]) -> String {
    let l = &result.labels;
    let (x0, y0) = (l.origin_x as f64 - 0.5, l.origin_y as f64 - 0.5);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.2} {:.2} {} {}" width="{}" height="{}">"#,
        x0,
        y0,
        l.width,
        l.height,
        4 * l.width,
        4 * l.height
    );
    s.push_str(
        "<style>.boundary{fill:none;stroke:#000;stroke-width:0.5}\
         .vv{stroke:#d62728;stroke-width:0.8}\
         .vc{stroke:#1f77b4;stroke-width:0.8}\
         .seed{fill:#2ca02c}.added{fill:#1f77b4}</style>\n",
    );
    let boundary: Vec<String> = result.boundary.vertices().iter().map(|&p| pt(p)).collect();
    let _ = writeln!(s, r#"<polygon class="boundary" points="{}"/>"#, boundary.join(" "));
    for c in &result.cuts {
        let class = if c.cut.kind() == CutKind::VertexVertex { "vv" } else { "vc" };
        let [a, b] = c.cut.points;
        let _ = writeln!(
            s,
            r#"<line class="{class}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            a.x, a.y, b.x, b.y
        );
    }
    for p in &result.added_vertices {
        let _ = writeln!(
            s,
            r#"<rect class="added" x="{:.2}" y="{:.2}" width="1.20" height="1.20"/>"#,
            p.x - 0.6,
            p.y - 0.6
        );
    }
    for p in seeds {
        let _ = writeln!(s, r#"<circle class="seed" cx="{:.2}" cy="{:.2}" r="0.80"/>"#, p.x, p.y);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{partition_clump, Config};
    use std::f64::consts::PI;

    /// Two lobes joined by a waist, one seed per lobe.
    fn peanut() -> (Vec<Point>, Vec<Point>) {
        let outline = (0..400)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 400.0;
                let r = 20.0 + 8.0 * (2.0 * t).cos();
                Point::new(50.0 + r * t.cos(), 40.0 + 0.6 * r * t.sin())
            })
            .collect();
        (outline, vec![Point::new(36.0, 40.0), Point::new(64.0, 40.0)])
    }

    #[test]
    fn documents_are_stable() {
        let (poly, seeds) = peanut();
        let r = partition_clump(&poly, &seeds, None, &Config::default()).unwrap();
        let a = CutsDocument::new(&r).to_json();
        let b = CutsDocument::new(&partition_clump(&poly, &seeds, None, &Config::default()).unwrap()).to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"regions\""));
        let svg = render_svg(&r, &seeds);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<line").count(), r.cuts.len());
    }
}
