//! Integer label rasters (masks, region maps, ground truth).

use crate::error::{Error, Result};

/// Row-major raster of integer labels; 0 is background.
///
/// Pixel `(col, row)` is centred on the coordinate
/// `(origin_x + col, origin_y + row)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelImage {
    pub width: usize,
    pub height: usize,
    pub origin_x: i64,
    pub origin_y: i64,
    pub data: Vec<u32>,
}

impl LabelImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            origin_x: 0,
            origin_y: 0,
            data: vec![0; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {}x{} raster",
                data.len(),
                width,
                height
            )));
        }
        Ok(Self {
            width,
            height,
            origin_x: 0,
            origin_y: 0,
            data,
        })
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> u32 {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, col: usize, row: usize, value: u32) {
        self.data[row * self.width + col] = value;
    }

    /// Label at signed pixel coordinates; outside the raster reads as 0.
    #[inline]
    pub fn get_signed(&self, col: i64, row: i64) -> u32 {
        if col < 0 || row < 0 || col as usize >= self.width || row as usize >= self.height {
            0
        } else {
            self.get(col as usize, row as usize)
        }
    }

    pub fn count(&self, label: u32) -> usize {
        self.data.iter().filter(|&&v| v == label).count()
    }

    /// Sorted distinct non-zero labels.
    pub fn labels(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.data.iter().copied().filter(|&v| v != 0).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn same_frame(&self, other: &LabelImage) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.origin_x == other.origin_x
            && self.origin_y == other.origin_y
    }
}

const N4: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const N8: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

/// Labels connected components of `mask[i] == true` in raster order.
/// Returns the label image (1-based) and the component count.
pub fn connected_components(
    width: usize,
    height: usize,
    mask: &[bool],
    eight_connected: bool,
) -> (Vec<u32>, u32) {
    let nbrs: &[(i64, i64)] = if eight_connected { &N8 } else { &N4 };
    let mut labels = vec![0u32; width * height];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..width * height {
        if !mask[start] || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        stack.push(start);
        while let Some(p) = stack.pop() {
            let (c, r) = ((p % width) as i64, (p / width) as i64);
            for &(dc, dr) in nbrs {
                let (nc, nr) = (c + dc, r + dr);
                if nc < 0 || nr < 0 || nc >= width as i64 || nr >= height as i64 {
                    continue;
                }
                let q = nr as usize * width + nc as usize;
                if mask[q] && labels[q] == 0 {
                    labels[q] = next;
                    stack.push(q);
                }
            }
        }
    }
    (labels, next)
}
