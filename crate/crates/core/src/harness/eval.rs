//! Scoring a partition against ground-truth labels.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::raster::LabelImage;

/// Largest object count handled by the exact matcher.
pub const MAX_MATCHED_OBJECTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub correct: bool,
    /// Why the case failed; `None` when correct.
    pub reason: Option<String>,
    pub regions: usize,
    pub objects: usize,
    /// IoU of each matched (region, object) pair, in object order.
    pub ious: Vec<f64>,
}

/// `ious[r][o]` between region labels and object labels, both in ascending
/// label order.
pub fn iou_matrix(result: &LabelImage, truth: &LabelImage) -> Result<(Vec<u32>, Vec<u32>, Vec<Vec<f64>>)> {
    if !result.same_frame(truth) {
        return Err(Error::ShapeMismatch(format!(
            "result is {}x{} at ({}, {}), truth is {}x{} at ({}, {})",
            result.width, result.height, result.origin_x, result.origin_y, truth.width, truth.height, truth.origin_x,
            truth.origin_y
        )));
    }
    let mut area_r: BTreeMap<u32, usize> = BTreeMap::new();
    let mut area_t: BTreeMap<u32, usize> = BTreeMap::new();
    let mut inter: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for (&r, &t) in result.data.iter().zip(&truth.data) {
        if r != 0 {
            *area_r.entry(r).or_insert(0) += 1;
        }
        if t != 0 {
            *area_t.entry(t).or_insert(0) += 1;
        }
        if r != 0 && t != 0 {
            *inter.entry((r, t)).or_insert(0) += 1;
        }
    }
    let regions: Vec<u32> = area_r.keys().copied().collect();
    let objects: Vec<u32> = area_t.keys().copied().collect();
    let matrix = regions
        .iter()
        .map(|r| {
            objects
                .iter()
                .map(|t| {
                    let i = inter.get(&(*r, *t)).copied().unwrap_or(0);
                    let u = area_r[r] + area_t[t] - i;
                    i as f64 / u as f64
                })
                .collect()
        })
        .collect();
    Ok((regions, objects, matrix))
}

/// Assignment of rows to distinct columns maximising the summed weight of a
/// square matrix. Returns the column per row.
pub fn best_matching(weights: &[Vec<f64>]) -> Vec<usize> {
    let n = weights.len();
    assert!(n <= MAX_MATCHED_OBJECTS, "too many objects for exact matching");
    let full = 1usize << n;
    // best[mask]: best total using the first popcount(mask) rows on columns `mask`
    let mut best = vec![f64::NEG_INFINITY; full];
    let mut choice = vec![usize::MAX; full];
    best[0] = 0.0;
    for mask in 0..full {
        if best[mask] == f64::NEG_INFINITY {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for (col, &w) in weights[row].iter().enumerate() {
            if mask & (1 << col) != 0 {
                continue;
            }
            let next = mask | (1 << col);
            let v = best[mask] + w;
            if v > best[next] {
                best[next] = v;
                choice[next] = col;
            }
        }
    }
    let mut cols = vec![0; n];
    let mut mask = full - 1;
    for row in (0..n).rev() {
        let col = choice[mask];
        cols[row] = col;
        mask &= !(1 << col);
    }
    cols
}

/// Correct iff region and object counts agree and the IoU-maximising
/// one-to-one matching has every pair at or above `threshold`.
pub fn evaluate_case(result: &LabelImage, truth: &LabelImage, threshold: f64) -> Result<Verdict> {
    let (regions, objects, matrix) = iou_matrix(result, truth)?;
    let mut v = Verdict {
        correct: false,
        reason: None,
        regions: regions.len(),
        objects: objects.len(),
        ious: Vec::new(),
    };
    if regions.len() != objects.len() {
        v.reason = Some(format!("{} regions for {} objects", regions.len(), objects.len()));
        return Ok(v);
    }
    if objects.len() > MAX_MATCHED_OBJECTS {
        v.reason = Some(format!("more than {MAX_MATCHED_OBJECTS} objects"));
        return Ok(v);
    }
    // rows are objects so the IoU list comes out in object order
    let by_object: Vec<Vec<f64>> = (0..objects.len())
        .map(|o| (0..regions.len()).map(|r| matrix[r][o]).collect())
        .collect();
    let cols = best_matching(&by_object);
    v.ious = cols.iter().enumerate().map(|(o, &r)| matrix[r][o]).collect();
    match v.ious.iter().position(|&x| x < threshold) {
        Some(o) => {
            v.reason = Some(format!(
                "object {} best matched with IoU {:.3} < {threshold}",
                objects[o], v.ious[o]
            ));
        }
        None => v.correct = true,
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(w: usize, data: &[u32]) -> LabelImage {
        LabelImage::from_vec(w, data.len() / w, data.to_vec()).unwrap()
    }

    #[test]
    fn identical_is_correct() {
        let t = img(4, &[1, 1, 2, 2, 1, 1, 2, 2]);
        let v = evaluate_case(&t, &t, 0.7).unwrap();
        assert!(v.correct);
        assert_eq!(v.ious, vec![1.0, 1.0]);
    }

    #[test]
    fn permuted_labels_still_correct() {
        let t = img(4, &[1, 1, 2, 2, 1, 1, 2, 2]);
        let r = img(4, &[5, 5, 3, 3, 5, 5, 3, 3]);
        assert!(evaluate_case(&r, &t, 0.7).unwrap().correct);
    }

    #[test]
    fn merged_objects_fail_on_count() {
        let t = img(4, &[1, 1, 2, 2]);
        let r = img(4, &[1, 1, 1, 1]);
        let v = evaluate_case(&r, &t, 0.7).unwrap();
        assert!(!v.correct);
        assert!(v.reason.unwrap().contains("1 regions for 2 objects"));
    }

    #[test]
    fn low_iou_fails() {
        // region 1 takes 13 of object 1's 20 pixels; IoU 13/20 = 0.65
        let mut t = vec![1; 20];
        t.extend(vec![2; 20]);
        let mut r = vec![1; 13];
        r.extend(vec![2; 27]);
        let v = evaluate_case(&img(40, &r), &img(40, &t), 0.7).unwrap();
        assert!(!v.correct);
        assert!((v.ious[0] - 0.65).abs() < 1e-12);
    }

    #[test]
    fn frame_mismatch() {
        assert!(matches!(
            evaluate_case(&img(2, &[1, 1]), &img(1, &[1, 1]), 0.7),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn matching_beats_greedy() {
        // greedy on row 0 would take column 0 (0.9) and leave 0.1
        let w = vec![vec![0.9, 0.8], vec![0.85, 0.1]];
        assert_eq!(best_matching(&w), vec![1, 0]);
    }
}
