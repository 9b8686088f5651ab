use super::{FieldKind, ScalarField};
use crate::error::{Error, Result};

/// Lower clamp applied to intensities before taking the reciprocal.
pub const INVERSION_FLOOR: f64 = 1.0 / 255.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageParams {
    pub blur_sigma: f64,
    pub closing_radius: f64,
}

impl Default for ImageParams {
    fn default() -> Self {
        Self {
            blur_sigma: 1.0,
            closing_radius: 3.0,
        }
    }
}

fn kernel_radius(sigma: f64) -> usize {
    (3.0 * sigma).ceil() as usize
}

/// Normalised Gaussian taps `g[-r..=r]` with `r = ceil(3 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let r = kernel_radius(sigma) as i64;
    let raw: Vec<f64> = (-r..=r)
        .map(|k| (-(k * k) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

/// Derivative-of-Gaussian taps `D[k] = k g(k) / Σ k² g(k)` for `k` in
/// `-r..=r`, applied as a correlation. A unit ramp responds with exactly 1.
pub fn derivative_kernel(sigma: f64) -> Vec<f64> {
    let r = kernel_radius(sigma) as i64;
    let g = |k: i64| (-(k * k) as f64 / (2.0 * sigma * sigma)).exp();
    let norm: f64 = (-r..=r).map(|k| (k * k) as f64 * g(k)).sum();
    (-r..=r).map(|k| k as f64 * g(k) / norm).collect()
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("blur sigma must be positive, got {sigma}")))
    }
}

/// Correlates every row (`horizontal`) or column with a symmetric kernel.
fn correlate_symmetric(field: &ScalarField, kernel: &[f64], horizontal: bool) -> Vec<f64> {
    let (w, h) = (field.width() as i64, field.height() as i64);
    let r = (kernel.len() / 2) as i64;
    let mut out = Vec::with_capacity(field.values().len());
    for y in 0..h {
        for x in 0..w {
            let mut acc = kernel[r as usize] * field.get(x as usize, y as usize);
            for k in 1..=r {
                let (a, b) = if horizontal {
                    (field.get_clamped(x - k, y), field.get_clamped(x + k, y))
                } else {
                    (field.get_clamped(x, y - k), field.get_clamped(x, y + k))
                };
                acc += kernel[(r + k) as usize] * (a + b);
            }
            out.push(acc);
        }
    }
    out
}

/// Correlates with an antisymmetric kernel, pairing taps so a constant input
/// gives exactly zero.
fn correlate_antisymmetric(field: &ScalarField, kernel: &[f64], horizontal: bool) -> Vec<f64> {
    let (w, h) = (field.width() as i64, field.height() as i64);
    let r = (kernel.len() / 2) as i64;
    let mut out = Vec::with_capacity(field.values().len());
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for k in 1..=r {
                let (lo, hi) = if horizontal {
                    (field.get_clamped(x - k, y), field.get_clamped(x + k, y))
                } else {
                    (field.get_clamped(x, y - k), field.get_clamped(x, y + k))
                };
                acc += kernel[(r + k) as usize] * (hi - lo);
            }
            out.push(acc);
        }
    }
    out
}

/// Separable Gaussian blur; keeps the field kind.
pub fn gaussian_blur(field: &ScalarField, sigma: f64) -> Result<ScalarField> {
    check_sigma(sigma)?;
    let kernel = gaussian_kernel(sigma);
    let rows = field.with_values(correlate_symmetric(field, &kernel, true), field.kind());
    Ok(field.with_values(correlate_symmetric(&rows, &kernel, false), field.kind()))
}

/// `(G_x, G_y)` of the blurred intensity.
pub fn gradient_components(intensity: &ScalarField, sigma: f64) -> Result<(ScalarField, ScalarField)> {
    let blurred = gaussian_blur(intensity, sigma)?;
    let d = derivative_kernel(sigma);
    let gx = blurred.with_values(correlate_antisymmetric(&blurred, &d, true), FieldKind::GradientMagnitude);
    let gy = blurred.with_values(correlate_antisymmetric(&blurred, &d, false), FieldKind::GradientMagnitude);
    Ok((gx, gy))
}

/// Gradient magnitude of the blurred intensity, closed with a disk.
pub fn gradient_magnitude(intensity: &ScalarField, params: &ImageParams) -> Result<ScalarField> {
    let (gx, gy) = gradient_components(intensity, params.blur_sigma)?;
    let mag = gx
        .values()
        .iter()
        .zip(gy.values())
        .map(|(a, b)| a.hypot(*b))
        .collect();
    let mag = intensity.with_values(mag, FieldKind::GradientMagnitude);
    Ok(close(&mag, params.closing_radius))
}

/// `1 / max(blur(I), 1/255)`.
pub fn inverted_image(intensity: &ScalarField, params: &ImageParams) -> Result<ScalarField> {
    let blurred = gaussian_blur(intensity, params.blur_sigma)?;
    let values = blurred
        .values()
        .iter()
        .map(|v| 1.0 / v.max(INVERSION_FLOOR))
        .collect();
    Ok(intensity.with_values(values, FieldKind::Inverted))
}

/// Pixel offsets within Euclidean distance `radius` of the origin.
pub fn disk_offsets(radius: f64) -> Vec<(i64, i64)> {
    let r = radius.floor().max(0.0) as i64;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if ((dx * dx + dy * dy) as f64) <= radius * radius {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// Max (`dilate`) or min over the in-bounds pixels of the disk.
fn rank_filter(field: &ScalarField, offsets: &[(i64, i64)], dilate: bool) -> ScalarField {
    let (w, h) = (field.width() as i64, field.height() as i64);
    let mut out = Vec::with_capacity(field.values().len());
    for y in 0..h {
        for x in 0..w {
            let mut acc = if dilate { f64::NEG_INFINITY } else { f64::INFINITY };
            for &(dx, dy) in offsets {
                let (sx, sy) = (x + dx, y + dy);
                if sx < 0 || sy < 0 || sx >= w || sy >= h {
                    continue;
                }
                let v = field.get(sx as usize, sy as usize);
                acc = if dilate { acc.max(v) } else { acc.min(v) };
            }
            out.push(acc);
        }
    }
    field.with_values(out, field.kind())
}

pub fn dilate(field: &ScalarField, radius: f64) -> ScalarField {
    rank_filter(field, &disk_offsets(radius), true)
}

pub fn erode(field: &ScalarField, radius: f64) -> ScalarField {
    rank_filter(field, &disk_offsets(radius), false)
}

/// Morphological closing: dilation followed by erosion with the same disk.
pub fn close(field: &ScalarField, radius: f64) -> ScalarField {
    erode(&dilate(field, radius), radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(w: usize, h: usize, f: impl Fn(usize, usize) -> f64) -> ScalarField {
        let mut v = Vec::new();
        for y in 0..h {
            for x in 0..w {
                v.push(f(x, y));
            }
        }
        ScalarField::new(w, h, v, FieldKind::Intensity).unwrap()
    }

    #[test]
    fn constant_blur_and_gradient() {
        let f = ScalarField::constant(9, 7, 0.7, FieldKind::Intensity).unwrap();
        let b = gaussian_blur(&f, 1.0).unwrap();
        assert!(b.values().iter().all(|v| (v - 0.7).abs() < 1e-15));
        let g = gradient_magnitude(&f, &ImageParams::default()).unwrap();
        assert!(g.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn impulse_peak() {
        let f = field(15, 15, |x, y| if x == 7 && y == 7 { 1.0 } else { 0.0 });
        let b = gaussian_blur(&f, 1.0).unwrap();
        let expected = 1.0 / (2.0 * std::f64::consts::PI);
        assert!((b.get(7, 7) - expected).abs() / expected < 0.05);
        assert!((b.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_sigma_rejected() {
        let f = ScalarField::constant(3, 3, 1.0, FieldKind::Intensity).unwrap();
        assert!(gaussian_blur(&f, 0.0).is_err());
    }

    #[test]
    fn derivative_kernel_unit_ramp() {
        let d = derivative_kernel(1.0);
        let r = (d.len() / 2) as i64;
        let response: f64 = (-r..=r).map(|k| d[(k + r) as usize] * k as f64).sum();
        assert!((response - 1.0).abs() < 1e-12);
    }

    #[test]
    fn step_edge_peaks_at_edge() {
        let f = field(30, 10, |x, _| if x < 15 { 0.2 } else { 1.0 });
        let (gx, gy) = gradient_components(&f, 1.0).unwrap();
        assert!(gy.values().iter().all(|&v| v == 0.0));
        let row: Vec<f64> = (0..30).map(|x| gx.get(x, 5)).collect();
        let best = row.iter().copied().fold(0.0, f64::max);
        assert!(row[14] == best || row[15] == best);
        assert_eq!(row[0], 0.0);
        assert_eq!(row[29], 0.0);
    }

    #[test]
    fn inverted_values() {
        let one = ScalarField::constant(5, 5, 1.0, FieldKind::Intensity).unwrap();
        let inv = inverted_image(&one, &ImageParams::default()).unwrap();
        assert!(inv.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let zero = ScalarField::constant(5, 5, 0.0, FieldKind::Intensity).unwrap();
        let inv = inverted_image(&zero, &ImageParams::default()).unwrap();
        assert!(inv.values().iter().all(|&v| (v - 255.0).abs() < 1e-9));
        let half = ScalarField::constant(11, 11, 0.5, FieldKind::Intensity).unwrap();
        let inv = inverted_image(&half, &ImageParams::default()).unwrap();
        assert!((inv.get(5, 5) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn disk_has_29_pixels() {
        assert_eq!(disk_offsets(3.0).len(), 29);
        assert_eq!(disk_offsets(0.0), vec![(0, 0)]);
    }

    #[test]
    fn closing_fills_ridge_gap_and_is_idempotent() {
        let f = field(20, 11, |x, y| if (2..=6).contains(&y) && x != 10 { 1.0 } else { 0.0 });
        let c = close(&f, 3.0);
        assert_eq!(c.get(10, 4), 1.0);
        assert!(c.values().iter().zip(f.values()).all(|(a, b)| a >= b));
        assert_eq!(close(&c, 3.0), c);
    }
}
