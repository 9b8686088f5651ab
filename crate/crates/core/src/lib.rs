//! Seed-point based geometric partitioning ("de-clumping") of overlapping
//! objects.
//!
//! Given the closed outer boundary of a clump and one seed point per object,
//! the pipeline builds two competing families of straight cuts:
//!
//! * vertex-vertex cuts between two boundary vertices, found by assigning
//!   boundary vertices to seeds and cutting across the gaps between the
//!   vertex runs owned by each seed;
//! * vertex-center cuts from boundary vertices to a new interior vertex placed
//!   inside filtered Delaunay triangles of the seeds.
//!
//! Where both families cover the same region, a four-category vote
//! (direction, curvature, image gradient, inverted image) picks one.
//!
//! Curvature follows a concave-positive convention: indentations of the region
//! have positive curvature and a disk of radius `r` has curvature `-1/r`.

pub mod assign;
pub mod cut;
pub mod error;
pub mod geom;
pub mod harness;
pub mod imaging;
pub mod pipeline;
pub mod raster;
pub mod select;
pub mod vccut;
pub mod vvcut;

pub use cut::{Anchor, Cut, CutKind, Owner};
pub use error::{Error, Result};
pub use geom::{ClosedBoundary, Contour, Point, Segment};
pub use imaging::{FieldKind, ScalarField};
pub use pipeline::{partition_clump, Config, PartitionResult};
pub use raster::LabelImage;
