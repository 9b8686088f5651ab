//! End-to-end partitioning of one clump.

mod config;
mod regions;

pub use config::Config;
pub use regions::{
    apply_cuts_to_mask, line_cells, rasterize_polygon, split_region, Frame, Region, RegionMap,
    SEPARATOR_OVERSHOOT,
};

use crate::assign::{assign_vertices, score_matrix};
use crate::cut::{Cut, CutKind};
use crate::error::{Error, Result};
use crate::geom::{delaunay, segments_properly_intersect, trace_boundary, ClosedBoundary, Point};
use crate::imaging::{gradient_magnitude, inverted_image, ScalarField};
use crate::raster::LabelImage;
use crate::select::{select_cuts, PairVote, VoteImages};
use crate::vccut::build_vc_cuts;
use crate::vvcut::build_vv_cuts;

/// A cut in the final partition.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedCut {
    pub cut: Cut,
    /// Index into [`Diagnostics::votes`] when the cut went through a vote.
    pub vote: Option<usize>,
}

/// Counters and traces gathered along the way.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub assignment_passes: usize,
    pub unassigned_vertices: usize,
    pub pieces: usize,
    /// Pieces left out of a seed's ordering (too far from the seed).
    pub dropped_pieces: usize,
    /// Gaps too short to be worth a cut.
    pub short_gaps: usize,
    /// Vertex-vertex cuts rejected as infeasible, duplicate or crossing.
    pub rejected_vv_cuts: usize,
    pub triangles: usize,
    pub filtered_triangles: usize,
    pub degenerate_groups: usize,
    pub votes: Vec<PairVote>,
    /// Selected cuts dropped because they crossed an earlier cut or left
    /// the region.
    pub discarded_cuts: usize,
    /// Seedless pieces folded into a neighbouring region.
    pub merged_regions: usize,
    /// Some image sample fell outside the image and was clamped.
    pub clamped_samples: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionResult {
    pub boundary: ClosedBoundary,
    pub cuts: Vec<PlacedCut>,
    /// Added interior vertices used by the final cuts.
    pub added_vertices: Vec<Point>,
    pub labels: LabelImage,
    pub regions: Vec<Region>,
    pub diagnostics: Diagnostics,
}

impl PartitionResult {
    pub fn cut_count(&self, kind: CutKind) -> usize {
        self.cuts.iter().filter(|c| c.cut.kind() == kind).count()
    }

    /// Total region area in pixels.
    pub fn area(&self) -> usize {
        self.regions.iter().map(|r| r.area).sum()
    }
}

/// Partitions the clump outlined by `polygon`. The raster frame is the
/// image's when one is given, else the polygon's bounding box.
pub fn partition_clump(
    polygon: &[Point],
    seeds: &[Point],
    image: Option<&ScalarField>,
    config: &Config,
) -> Result<PartitionResult> {
    let frame = match image {
        Some(img) => Frame::new(img.width(), img.height()),
        None => Frame::around(polygon),
    };
    partition_clump_in_frame(polygon, seeds, image, config, frame)
}

/// As [`partition_clump`] with an explicit raster frame.
pub fn partition_clump_in_frame(
    polygon: &[Point],
    seeds: &[Point],
    image: Option<&ScalarField>,
    config: &Config,
    frame: Frame,
) -> Result<PartitionResult> {
    config.validate()?;
    let boundary = ClosedBoundary::from_polygon(polygon, config.curvature())?;
    let region = rasterize_polygon(polygon, frame);
    run(boundary, region, seeds, image, config)
}

/// Partitions the region of `mask` carrying `label`; the region raster is
/// the mask itself.
pub fn partition_mask(
    mask: &LabelImage,
    label: u32,
    seeds: &[Point],
    image: Option<&ScalarField>,
    config: &Config,
) -> Result<PartitionResult> {
    config.validate()?;
    let polygon = trace_boundary(mask, label)?;
    let boundary = ClosedBoundary::from_polygon(&polygon, config.curvature())?;
    let mut region = mask.clone();
    for v in region.data.iter_mut() {
        *v = u32::from(*v == label);
    }
    run(boundary, region, seeds, image, config)
}

fn check_image(image: &ScalarField, region: &LabelImage) -> Result<()> {
    if region.origin_x != 0 || region.origin_y != 0 || image.width() != region.width || image.height() != region.height {
        return Err(Error::ShapeMismatch(format!(
            "image is {}x{}, region raster is {}x{} at ({}, {})",
            image.width(),
            image.height(),
            region.width,
            region.height,
            region.origin_x,
            region.origin_y
        )));
    }
    Ok(())
}

/// Keeps cuts in order, dropping any that leave the region or properly cross
/// one already kept.
fn sanitize(cuts: Vec<PlacedCut>, boundary: &ClosedBoundary) -> (Vec<PlacedCut>, usize) {
    let mut kept: Vec<PlacedCut> = Vec::new();
    let mut dropped = 0;
    for c in cuts {
        let seg = c.cut.segment();
        let ok = c.cut.is_interior(boundary)
            && !kept
                .iter()
                .any(|k| segments_properly_intersect(&k.cut.segment(), &seg));
        if ok {
            kept.push(c);
        } else {
            dropped += 1;
        }
    }
    (kept, dropped)
}

fn run(
    boundary: ClosedBoundary,
    region: LabelImage,
    seeds: &[Point],
    image: Option<&ScalarField>,
    config: &Config,
) -> Result<PartitionResult> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    let frame = Frame::of(&region);
    for (index, &s) in seeds.iter().enumerate() {
        if frame.cell(s).is_none_or(|(c, r)| region.get(c, r) == 0) {
            return Err(Error::SeedOutsideBoundary { index, x: s.x, y: s.y });
        }
    }
    let images = match image {
        Some(img) => {
            check_image(img, &region)?;
            Some(VoteImages {
                gradient: gradient_magnitude(img, &config.image())?,
                inverted: inverted_image(img, &config.image())?,
            })
        }
        None => None,
    };

    let mut diag = Diagnostics::default();
    let scores = score_matrix(&boundary, seeds, &config.assign())?;
    let assignment = assign_vertices(&scores);
    diag.assignment_passes = assignment.passes;
    diag.unassigned_vertices = boundary.len() - assignment.assigned_count();

    let vv = build_vv_cuts(&boundary, &assignment, seeds, &config.vv());
    diag.pieces = vv.pieces;
    diag.dropped_pieces = vv.dropped_pieces;
    diag.short_gaps = vv.short_gaps;
    diag.rejected_vv_cuts = vv.rejected;

    let triangulation = if seeds.len() >= 3 {
        match delaunay(seeds) {
            Ok(t) => t,
            Err(Error::EmptyTriangulation) => Vec::new(),
            Err(e) => return Err(e),
        }
    } else {
        Vec::new()
    };
    let vc = build_vc_cuts(&boundary, seeds, &triangulation, &config.vc());
    diag.triangles = vc.triangulated;
    diag.filtered_triangles = vc.triangles.len();
    diag.degenerate_groups = vc.groups.iter().filter(|g| g.group.degenerate).count();

    let selection = select_cuts(&vv.cuts, &vc.groups, seeds, &boundary, images.as_ref());
    diag.clamped_samples = selection.clamped_samples;
    let vote_of_vv = |k: usize| selection.votes.iter().position(|v| v.pair.vv.contains(&k));
    let vote_of_group = |g: usize| selection.votes.iter().position(|v| v.pair.group == g);
    let mut placed: Vec<PlacedCut> = selection
        .vv_kept
        .iter()
        .map(|&k| PlacedCut {
            cut: vv.cuts[k].clone(),
            vote: vote_of_vv(k),
        })
        .collect();
    for &g in &selection.groups_kept {
        placed.extend(vc.groups[g].cuts.iter().map(|c| PlacedCut {
            cut: c.clone(),
            vote: vote_of_group(g),
        }));
    }
    diag.votes = selection.votes.clone();
    let (cuts, discarded) = sanitize(placed, &boundary);
    diag.discarded_cuts = discarded;

    let mut added_vertices = Vec::new();
    for &g in &selection.groups_kept {
        for (t, p) in vc.groups[g].added_vertices() {
            let used = cuts
                .iter()
                .any(|c| c.cut.ends.contains(&crate::cut::Anchor::TriangleCenter(t)));
            if used {
                added_vertices.push(p);
            }
        }
    }

    let plain: Vec<Cut> = cuts.iter().map(|c| c.cut.clone()).collect();
    let map = apply_cuts_to_mask(&region, &plain, seeds);
    diag.merged_regions = map.merged;
    Ok(PartitionResult {
        boundary,
        cuts,
        added_vertices,
        labels: map.labels,
        regions: map.regions,
        diagnostics: diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ellipse(cx: f64, cy: f64, a: f64, b: f64, n: usize) -> Vec<Point> {
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point::new(cx + a * t.cos(), cy + b * t.sin())
            })
            .collect()
    }

    #[test]
    fn single_seed_whole_region() {
        let poly = ellipse(40.0, 40.0, 18.0, 14.0, 240);
        let r = partition_clump(&poly, &[Point::new(40.0, 40.0)], None, &Config::default()).unwrap();
        assert!(r.cuts.is_empty());
        assert_eq!(r.regions.len(), 1);
        assert_eq!(r.regions[0].seeds, vec![0]);
        assert_eq!(r.area(), rasterize_polygon(&poly, Frame::around(&poly)).count(1));
    }

    #[test]
    fn seed_outside_rejected() {
        let poly = ellipse(40.0, 40.0, 18.0, 14.0, 240);
        let err = partition_clump(&poly, &[Point::new(40.0, 40.0), Point::new(80.0, 40.0)], None, &Config::default());
        assert!(matches!(err, Err(Error::SeedOutsideBoundary { index: 1, .. })));
        assert!(matches!(
            partition_clump(&poly, &[], None, &Config::default()),
            Err(Error::EmptySeeds)
        ));
    }

    #[test]
    fn image_frame_must_match() {
        let poly = ellipse(40.0, 40.0, 18.0, 14.0, 240);
        let img = ScalarField::constant(30, 30, 1.0, crate::imaging::FieldKind::Intensity).unwrap();
        let err = partition_clump_in_frame(
            &poly,
            &[Point::new(40.0, 40.0)],
            Some(&img),
            &Config::default(),
            Frame::new(100, 100),
        );
        assert!(matches!(err, Err(Error::ShapeMismatch(_))));
    }
}
