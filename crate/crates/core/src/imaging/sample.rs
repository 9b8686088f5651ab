use super::ScalarField;
use crate::geom::Segment;

/// Bilinear samples taken along a segment.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SegmentSample {
    pub sum: f64,
    pub count: usize,
    /// Some sample fell outside the field and was clamped onto it.
    pub clamped: bool,
}

impl SegmentSample {
    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }

    pub fn merge(&mut self, other: SegmentSample) {
        self.sum += other.sum;
        self.count += other.count;
        self.clamped |= other.clamped;
    }
}

/// Samples `ceil(length)` equal steps along `seg`, both endpoints included,
/// so no step exceeds one pixel. A zero-length segment gives one sample.
pub fn sample_along_segment(field: &ScalarField, seg: &Segment) -> SegmentSample {
    let steps = seg.length().ceil() as usize;
    let mut out = SegmentSample::default();
    for k in 0..=steps {
        let p = if steps == 0 {
            seg.a
        } else {
            seg.a.lerp(seg.b, k as f64 / steps as f64)
        };
        let (v, clamped) = field.bilinear(p.x, p.y);
        out.sum += v;
        out.count += 1;
        out.clamped |= clamped;
    }
    out
}
