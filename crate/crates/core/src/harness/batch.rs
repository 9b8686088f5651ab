//! Case directories, batch runs and evaluation reports.
//!
//! A case is a directory holding `case.yaml`:
//!
//! ```yaml
//! id: case-0000
//! mask: mask.pgm      # or `boundary: polygon.yaml`
//! label: 1
//! seeds: seeds.yaml
//! image: image.pgm    # optional
//! truth: truth.pgm    # optional
//! ```
//!
//! Paths are relative to the case directory.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eval::{evaluate_case, Verdict};
use super::io::{read_gray, read_labels, read_polygon, read_seeds, write_gray8, write_labels, write_seeds};
use super::output::{render_svg, CutsDocument};
use super::synth::{generate_clump, SynthParams, SyntheticClump};
use crate::cut::CutKind;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::imaging::ScalarField;
use crate::pipeline::{partition_clump, partition_clump_in_frame, partition_mask, Config, Frame, PartitionResult};
use crate::raster::LabelImage;

pub const MANIFEST: &str = "case.yaml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseManifest {
    pub id: Option<String>,
    pub boundary: Option<PathBuf>,
    pub mask: Option<PathBuf>,
    pub label: Option<u32>,
    pub seeds: PathBuf,
    pub image: Option<PathBuf>,
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegionSource {
    Polygon(Vec<Point>),
    Mask { mask: LabelImage, label: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClumpCase {
    pub id: String,
    pub source: RegionSource,
    pub seeds: Vec<Point>,
    pub image: Option<ScalarField>,
    pub truth: Option<LabelImage>,
}

impl ClumpCase {
    /// Runs the pipeline. Polygon cases without an image are rasterised in
    /// the truth frame when there is one.
    pub fn partition(&self, config: &Config) -> Result<PartitionResult> {
        match &self.source {
            RegionSource::Mask { mask, label } => {
                partition_mask(mask, *label, &self.seeds, self.image.as_ref(), config)
            }
            RegionSource::Polygon(poly) => match (&self.image, &self.truth) {
                (None, Some(truth)) => partition_clump_in_frame(poly, &self.seeds, None, config, Frame::of(truth)),
                _ => partition_clump(poly, &self.seeds, self.image.as_ref(), config),
            },
        }
    }
}

pub fn read_manifest(dir: &Path) -> Result<CaseManifest> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_yaml::from_str(&text).map_err(|e| Error::parse(&path, e))
}

pub fn load_case(dir: &Path) -> Result<ClumpCase> {
    let m = read_manifest(dir)?;
    let manifest_path = dir.join(MANIFEST);
    let id = m.id.clone().unwrap_or_else(|| {
        dir.file_name()
            .map_or_else(|| "case".to_string(), |n| n.to_string_lossy().into_owned())
    });
    let source = match (&m.boundary, &m.mask) {
        (Some(b), None) => RegionSource::Polygon(read_polygon(&dir.join(b))?),
        (None, Some(mask)) => RegionSource::Mask {
            mask: read_labels(&dir.join(mask))?,
            label: m.label.unwrap_or(1),
        },
        _ => {
            return Err(Error::parse(
                manifest_path,
                "exactly one of `boundary` and `mask` must be given",
            ))
        }
    };
    let image = match &m.image {
        Some(p) => Some(read_gray(&dir.join(p))?.intensity()?),
        None => None,
    };
    let truth = match &m.truth {
        Some(p) => Some(read_labels(&dir.join(p))?),
        None => None,
    };
    Ok(ClumpCase {
        id,
        source,
        seeds: read_seeds(&dir.join(&m.seeds))?,
        image,
        truth,
    })
}

/// Case directories under `root`, sorted by name. `root` itself counts when
/// it holds a manifest.
pub fn discover_cases(root: &Path) -> Result<Vec<PathBuf>> {
    if root.join(MANIFEST).is_file() {
        return Ok(vec![root.to_path_buf()]);
    }
    let entries = fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut out = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        let path = entry.path();
        if path.join(MANIFEST).is_file() {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Writes a synthetic clump as a case directory.
pub fn write_case(dir: &Path, id: &str, clump: &SyntheticClump) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_labels(&dir.join("mask.pgm"), &clump.mask)?;
    write_labels(&dir.join("truth.pgm"), &clump.truth)?;
    write_gray8(&dir.join("image.pgm"), clump.width(), clump.height(), &clump.image)?;
    write_seeds(&dir.join("seeds.yaml"), &clump.seeds)?;
    let manifest = CaseManifest {
        id: Some(id.to_string()),
        boundary: None,
        mask: Some("mask.pgm".into()),
        label: Some(1),
        seeds: "seeds.yaml".into(),
        image: Some("image.pgm".into()),
        truth: Some("truth.pgm".into()),
    };
    let text = serde_yaml::to_string(&manifest).map_err(|e| Error::parse(dir.join(MANIFEST), e))?;
    let path = dir.join(MANIFEST);
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

/// Per-case generator seeds derived from one master seed.
pub fn corpus_seeds(rng_seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    (0..count).map(|_| rng.next_u64()).collect()
}

/// Generates `count` clumps; case `k` is named `case-{k:04}`.
pub fn synth_corpus(rng_seed: u64, count: usize, params: &SynthParams) -> Result<Vec<(String, SyntheticClump)>> {
    corpus_seeds(rng_seed, count)
        .into_iter()
        .enumerate()
        .map(|(k, s)| Ok((format!("case-{k:04}"), generate_clump(s, params)?)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BatchOptions {
    pub jobs: usize,
    pub svg: bool,
    pub emit_mask: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub error: Option<String>,
    pub seeds: usize,
    pub regions: usize,
    pub vertex_vertex_cuts: usize,
    pub vertex_center_cuts: usize,
    pub center_center_cuts: usize,
    pub verdict: Option<Verdict>,
}

impl CaseReport {
    /// Evaluated and judged correct.
    pub fn is_correct(&self) -> bool {
        self.verdict.as_ref().is_some_and(|v| v.correct)
    }

    /// Counts towards the aggregate: truth was available or the case failed.
    pub fn is_evaluated(&self) -> bool {
        self.verdict.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub cases: Vec<CaseReport>,
    pub total: usize,
    pub evaluated: usize,
    pub correct: usize,
    /// `correct / evaluated`; absent when nothing was evaluated.
    pub correct_fraction: Option<f64>,
}

impl EvalReport {
    pub fn from_cases(cases: Vec<CaseReport>) -> Self {
        let evaluated = cases.iter().filter(|c| c.is_evaluated()).count();
        let correct = cases.iter().filter(|c| c.is_correct()).count();
        Self {
            total: cases.len(),
            evaluated,
            correct,
            correct_fraction: (evaluated > 0).then(|| correct as f64 / evaluated as f64),
            cases,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// One-line summary, e.g. `correct fraction: 0.990 (198/200)`.
    pub fn summary(&self) -> String {
        match self.correct_fraction {
            Some(f) => format!("correct fraction: {f:.3} ({}/{})", self.correct, self.evaluated),
            None => format!("{} cases partitioned, none with ground truth", self.total),
        }
    }
}

/// Runs one loaded case and writes its outputs under `out` when given.
pub fn process_case(
    case: &ClumpCase,
    config: &Config,
    out: Option<&Path>,
    opts: &BatchOptions,
) -> Result<(PartitionResult, Option<Verdict>)> {
    let result = case.partition(config)?;
    if let Some(dir) = out {
        write_outputs(dir, case, &result, opts)?;
    }
    let verdict = match &case.truth {
        Some(t) => Some(evaluate_case(&result.labels, t, config.iou_threshold)?),
        None => None,
    };
    Ok((result, verdict))
}

pub fn write_outputs(dir: &Path, case: &ClumpCase, result: &PartitionResult, opts: &BatchOptions) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let cuts = dir.join("cuts.json");
    fs::write(&cuts, CutsDocument::new(result).to_json()).map_err(|e| Error::io(&cuts, e))?;
    if opts.emit_mask {
        write_labels(&dir.join("labels.pgm"), &result.labels)?;
    }
    if opts.svg {
        let svg = dir.join("overlay.svg");
        fs::write(&svg, render_svg(result, &case.seeds)).map_err(|e| Error::io(&svg, e))?;
    }
    Ok(())
}

fn failed(error: &Error, objects: usize) -> Verdict {
    Verdict {
        correct: false,
        reason: Some(format!("error: {error}")),
        regions: 0,
        objects,
        ious: Vec::new(),
    }
}

fn report_case(dir: &Path, config: &Config, out: Option<&Path>, opts: &BatchOptions) -> CaseReport {
    let fallback_id = dir
        .file_name()
        .map_or_else(|| "case".to_string(), |n| n.to_string_lossy().into_owned());
    let case = match load_case(dir) {
        Ok(c) => c,
        Err(e) => {
            return CaseReport {
                id: fallback_id,
                error: Some(e.to_string()),
                seeds: 0,
                regions: 0,
                vertex_vertex_cuts: 0,
                vertex_center_cuts: 0,
                center_center_cuts: 0,
                verdict: Some(failed(&e, 0)),
            }
        }
    };
    let case_out = out.map(|o| o.join(&case.id));
    let mut report = CaseReport {
        id: case.id.clone(),
        error: None,
        seeds: case.seeds.len(),
        regions: 0,
        vertex_vertex_cuts: 0,
        vertex_center_cuts: 0,
        center_center_cuts: 0,
        verdict: None,
    };
    match process_case(&case, config, case_out.as_deref(), opts) {
        Ok((r, verdict)) => {
            report.regions = r.regions.len();
            report.vertex_vertex_cuts = r.cut_count(CutKind::VertexVertex);
            report.vertex_center_cuts = r.cut_count(CutKind::VertexCenter);
            report.center_center_cuts = r.cut_count(CutKind::CenterCenter);
            report.verdict = verdict;
        }
        Err(e) => {
            report.error = Some(e.to_string());
            let objects = case.truth.as_ref().map_or(0, |t| t.labels().len());
            report.verdict = Some(failed(&e, objects));
        }
    }
    report
}

/// Partitions every case on `opts.jobs` worker threads (0 picks the number
/// of cores) and assembles the report in case order. Failures are recorded
/// per case and never abort the batch.
pub fn run_batch(case_dirs: &[PathBuf], config: &Config, out: Option<&Path>, opts: &BatchOptions) -> Result<EvalReport> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let cases = pool.install(|| {
        case_dirs
            .par_iter()
            .map(|dir| report_case(dir, config, out, opts))
            .collect::<Vec<_>>()
    });
    let report = EvalReport::from_cases(cases);
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("report.json");
        fs::write(&path, report.to_json()).map_err(|e| Error::io(&path, e))?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(root: &Path, n: usize) -> Vec<PathBuf> {
        for (id, clump) in synth_corpus(3, n, &SynthParams::default()).unwrap() {
            write_case(&root.join(&id), &id, &clump).unwrap();
        }
        discover_cases(root).unwrap()
    }

    #[test]
    fn written_case_loads_back() {
        let dir = tempfile::tempdir().unwrap();
        let dirs = corpus(dir.path(), 1);
        let case = load_case(&dirs[0]).unwrap();
        let clump = &synth_corpus(3, 1, &SynthParams::default()).unwrap()[0].1;
        assert_eq!(case.id, "case-0000");
        assert_eq!(case.seeds, clump.seeds);
        assert_eq!(case.truth.as_ref(), Some(&clump.truth));
        assert_eq!(case.image.as_ref().map(|i| i.width()), Some(clump.width()));
    }

    #[test]
    fn report_independent_of_jobs() {
        let dir = tempfile::tempdir().unwrap();
        let dirs = corpus(&dir.path().join("cases"), 4);
        let out1 = dir.path().join("o1");
        let out4 = dir.path().join("o4");
        let cfg = Config::default();
        let opts = |jobs| BatchOptions {
            jobs,
            svg: true,
            emit_mask: true,
        };
        let r1 = run_batch(&dirs, &cfg, Some(&out1), &opts(1)).unwrap();
        let r4 = run_batch(&dirs, &cfg, Some(&out4), &opts(4)).unwrap();
        assert_eq!(r1, r4);
        for f in ["report.json", "case-0002/cuts.json", "case-0002/labels.pgm", "case-0002/overlay.svg"] {
            assert_eq!(fs::read(out1.join(f)).unwrap(), fs::read(out4.join(f)).unwrap(), "{f}");
        }
        assert_eq!(r1.total, 4);
        assert_eq!(r1.correct, r1.cases.iter().filter(|c| c.is_correct()).count());
    }

    #[test]
    fn broken_case_is_recorded() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad");
        fs::create_dir_all(&bad).unwrap();
        fs::write(bad.join(MANIFEST), "seeds: missing.yaml\nmask: nothing.pgm\n").unwrap();
        let r = run_batch(&[bad], &Config::default(), None, &BatchOptions::default()).unwrap();
        assert_eq!(r.total, 1);
        assert!(r.cases[0].error.is_some());
        assert_eq!(r.correct_fraction, Some(0.0));
    }

    #[test]
    fn summary_has_three_decimals() {
        let r = EvalReport {
            cases: Vec::new(),
            total: 3,
            evaluated: 3,
            correct: 2,
            correct_fraction: Some(2.0 / 3.0),
        };
        assert_eq!(r.summary(), "correct fraction: 0.667 (2/3)");
    }
}
