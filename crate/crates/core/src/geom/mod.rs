//! Geometric substrate: points, closed boundaries with normals and
//! curvature, segment predicates and Delaunay triangulation.

mod boundary;
mod delaunay;
mod point;
mod predicates;

pub use boundary::{
    compute_curvature, compute_normals, resample_and_orient, signed_area, trace_boundary,
    ClosedBoundary, Contour, CurvatureParams,
};
pub use delaunay::{circumcircle, delaunay, Triangle};
pub use point::Point;
pub use predicates::{
    point_in_polygon, point_in_triangle, segment_crosses_triangle, segment_intersects_boundary,
    segments_properly_intersect, Segment,
};
