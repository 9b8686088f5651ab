//! Raster kernels used by the voting stage.
//!
//! All convolutions replicate the border pixel. Fields are row-major with
//! `x` the column and `y` the row.

mod filter;
mod sample;

pub use filter::{
    close, derivative_kernel, dilate, disk_offsets, erode, gaussian_blur, gaussian_kernel, gradient_components,
    gradient_magnitude, inverted_image, ImageParams, INVERSION_FLOOR,
};
pub use sample::{sample_along_segment, SegmentSample};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// Normalised intensity in `[0, 1]`.
    Intensity,
    GradientMagnitude,
    /// Reciprocal of blurred intensity, in `[1, 255]`.
    Inverted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    width: usize,
    height: usize,
    values: Vec<f64>,
    kind: FieldKind,
}

impl ScalarField {
    pub fn new(width: usize, height: usize, values: Vec<f64>, kind: FieldKind) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyField);
        }
        if values.len() != width * height {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {width}x{height} field",
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            values,
            kind,
        })
    }

    pub fn constant(width: usize, height: usize, value: f64, kind: FieldKind) -> Result<Self> {
        Self::new(width, height, vec![value; width * height], kind)
    }

    /// Intensity field from raw grey levels, divided by the largest level so
    /// the brightest pixel is 1. An all-zero image stays zero.
    pub fn from_raw(width: usize, height: usize, raw: &[f64]) -> Result<Self> {
        let max = raw.iter().copied().fold(0.0, f64::max);
        let values = if max > 0.0 {
            raw.iter().map(|v| v.max(0.0) / max).collect()
        } else {
            vec![0.0; raw.len()]
        };
        Self::new(width, height, values, FieldKind::Intensity)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// Value at a possibly out-of-range pixel, replicating the border.
    pub fn get_clamped(&self, x: i64, y: i64) -> f64 {
        let cx = x.clamp(0, self.width as i64 - 1) as usize;
        let cy = y.clamp(0, self.height as i64 - 1) as usize;
        self.get(cx, cy)
    }

    /// Bilinear interpolation at `(x, y)`. Points outside the pixel-centre
    /// rectangle are clamped onto it and reported with `true`.
    pub fn bilinear(&self, x: f64, y: f64) -> (f64, bool) {
        let max_x = (self.width - 1) as f64;
        let max_y = (self.height - 1) as f64;
        let clamped = !(0.0..=max_x).contains(&x) || !(0.0..=max_y).contains(&y);
        let x = if x.is_nan() { 0.0 } else { x.clamp(0.0, max_x) };
        let y = if y.is_nan() { 0.0 } else { y.clamp(0.0, max_y) };
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let top = self.get(x0, y0) * (1.0 - fx) + self.get(x1, y0) * fx;
        let bottom = self.get(x0, y1) * (1.0 - fx) + self.get(x1, y1) * fx;
        (top * (1.0 - fy) + bottom * fy, clamped)
    }

    pub(crate) fn with_values(&self, values: Vec<f64>, kind: FieldKind) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            width: self.width,
            height: self.height,
            values,
            kind,
        }
    }
}
