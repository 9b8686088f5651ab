use serde::{Deserialize, Serialize};

use crate::assign::AssignParams;
use crate::error::{Error, Result};
use crate::geom::CurvatureParams;
use crate::imaging::ImageParams;
use crate::vccut::{AngleFilterParams, VcParams};
use crate::vvcut::VvParams;

/// Tunable parameters. Lengths are in pixels, angles `Theta_*` in degrees.
/// File keys match the serde names; unknown keys are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Longest admissible vertex-to-seed distance.
    #[serde(rename = "R_max")]
    pub r_max: f64,
    /// Smallest admissible cosine between a vertex normal and the direction
    /// to its seed.
    pub theta_min: f64,
    /// Smallest interior angle of a kept seed triangle.
    #[serde(rename = "Theta_min")]
    pub angle_min_deg: f64,
    /// Largest interior angle of a kept seed triangle.
    #[serde(rename = "Theta_max")]
    pub angle_max_deg: f64,
    /// Arc radius searched when moving cut endpoints.
    pub neighborhood_radius: f64,
    /// Weight applied to negative (convex) curvature in cut objectives.
    pub negative_curvature_factor: f64,
    pub blur_sigma: f64,
    pub closing_radius: f64,
    /// Half-width of the arc over which curvature is measured.
    pub curvature_window: f64,
    /// Gaussian smoothing of boundary coordinates before normals and
    /// curvature.
    pub curvature_smooth_sigma: f64,
    /// Matching threshold used when scoring against ground truth.
    pub iou_threshold: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            r_max: 35.0,
            theta_min: 0.5,
            angle_min_deg: 20.0,
            angle_max_deg: 110.0,
            neighborhood_radius: 7.0,
            negative_curvature_factor: 5.0,
            blur_sigma: 1.0,
            closing_radius: 3.0,
            curvature_window: 5.0,
            curvature_smooth_sigma: 2.0,
            iou_threshold: 0.7,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("R_max", self.r_max),
            ("Theta_min", self.angle_min_deg),
            ("Theta_max", self.angle_max_deg),
            ("neighborhood_radius", self.neighborhood_radius),
            ("negative_curvature_factor", self.negative_curvature_factor),
            ("blur_sigma", self.blur_sigma),
            ("closing_radius", self.closing_radius),
            ("curvature_window", self.curvature_window),
            ("curvature_smooth_sigma", self.curvature_smooth_sigma),
            ("iou_threshold", self.iou_threshold),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(-1.0..=1.0).contains(&self.theta_min) {
            return Err(Error::Config(format!(
                "theta_min must lie in [-1, 1], got {}",
                self.theta_min
            )));
        }
        if self.angle_min_deg >= self.angle_max_deg {
            return Err(Error::Config(format!(
                "Theta_min ({}) must be below Theta_max ({})",
                self.angle_min_deg, self.angle_max_deg
            )));
        }
        if self.iou_threshold > 1.0 {
            return Err(Error::Config(format!(
                "iou_threshold must not exceed 1, got {}",
                self.iou_threshold
            )));
        }
        Ok(())
    }

    pub fn curvature(&self) -> CurvatureParams {
        CurvatureParams {
            window: self.curvature_window,
            smooth_sigma: self.curvature_smooth_sigma,
        }
    }

    pub fn assign(&self) -> AssignParams {
        AssignParams {
            r_max: self.r_max,
            theta_min: self.theta_min,
        }
    }

    pub fn vv(&self) -> VvParams {
        VvParams {
            r_max: self.r_max,
            radius: self.neighborhood_radius,
            negative_factor: self.negative_curvature_factor,
        }
    }

    pub fn vc(&self) -> VcParams {
        VcParams {
            angles: AngleFilterParams {
                theta_min_deg: self.angle_min_deg,
                theta_max_deg: self.angle_max_deg,
            },
            radius: self.neighborhood_radius,
            negative_factor: self.negative_curvature_factor,
        }
    }

    pub fn image(&self) -> ImageParams {
        ImageParams {
            blur_sigma: self.blur_sigma,
            closing_radius: self.closing_radius,
        }
    }
}
