//! C interface to the declump partitioning pipeline.
//!
//! Configs and results are opaque handles owned by the caller and released
//! with the matching `_free` function. Every fallible call returns a
//! [`DeclumpStatus`]; on failure `declump_last_error` describes the cause.
//! Points are passed as interleaved `x, y` doubles in pixel coordinates.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use declump::pipeline::partition_mask;
use declump::{partition_clump, Config, CutKind, Error, LabelImage, PartitionResult, Point, ScalarField};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclumpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    InvalidBoundary = 4,
    InvalidSeeds = 5,
    ShapeMismatch = 6,
    OutOfRange = 7,
    Failed = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclumpCutKind {
    VertexVertex = 0,
    VertexCenter = 1,
    CenterCenter = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeclumpCut {
    pub kind: DeclumpCutKind,
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

/// Placement of the label raster: pixel `(col, row)` of the buffer sits at
/// `(origin_x + col, origin_y + row)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeclumpFrame {
    pub origin_x: i64,
    pub origin_y: i64,
    pub width: usize,
    pub height: usize,
}

pub struct DeclumpConfig(Config);

pub struct DeclumpResult(PartitionResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: DeclumpStatus, message: impl Into<String>) -> DeclumpStatus {
    set_error(message.into());
    status
}

fn status_of(err: &Error) -> DeclumpStatus {
    match err {
        Error::Config(_) => DeclumpStatus::InvalidConfig,
        Error::NotFound(_)
        | Error::AmbiguousRegion { .. }
        | Error::TooSmall { .. }
        | Error::InvalidBoundary(_)
        | Error::DegenerateVertex(_)
        | Error::BoundaryTooShort { .. } => DeclumpStatus::InvalidBoundary,
        Error::EmptySeeds | Error::DuplicateSeed(..) | Error::SeedOutsideBoundary { .. } => {
            DeclumpStatus::InvalidSeeds
        }
        Error::ShapeMismatch(_) | Error::EmptyField => DeclumpStatus::ShapeMismatch,
        _ => DeclumpStatus::Failed,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), DeclumpStatus>) -> DeclumpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DeclumpStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(DeclumpStatus::Panic, "internal panic"),
    }
}

fn lib_err(err: Error) -> DeclumpStatus {
    fail(status_of(&err), err.to_string())
}

unsafe fn points(xy: *const f64, count: usize, what: &str) -> Result<Vec<Point>, DeclumpStatus> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if xy.is_null() {
        return Err(fail(DeclumpStatus::NullPointer, format!("{what} is null")));
    }
    let raw = slice::from_raw_parts(xy, 2 * count);
    Ok(raw.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect())
}

unsafe fn image(values: *const f64, width: usize, height: usize) -> Result<Option<ScalarField>, DeclumpStatus> {
    if values.is_null() {
        return Ok(None);
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| fail(DeclumpStatus::InvalidArgument, "image size overflows"))?;
    let raw = slice::from_raw_parts(values, n);
    ScalarField::from_raw(width, height, raw).map(Some).map_err(lib_err)
}

unsafe fn config_ref(config: *const DeclumpConfig) -> Result<Config, DeclumpStatus> {
    if config.is_null() {
        Ok(Config::default())
    } else {
        Ok((*config).0)
    }
}

unsafe fn store(out: *mut *mut DeclumpResult, result: PartitionResult) {
    *out = Box::into_raw(Box::new(DeclumpResult(result)));
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn declump_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// New config holding the defaults.
#[no_mangle]
pub extern "C" fn declump_config_new() -> *mut DeclumpConfig {
    Box::into_raw(Box::new(DeclumpConfig(Config::default())))
}

/// # Safety
/// `config` must come from `declump_config_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn declump_config_free(config: *mut DeclumpConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Sets one numeric field by its config-file name (`R_max`, `Theta_min`,
/// `blur_sigma`, ...). The config is left unchanged on failure.
///
/// # Safety
/// `config` must be a live handle and `key` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn declump_config_set(config: *mut DeclumpConfig, key: *const c_char, value: f64) -> DeclumpStatus {
    guard(|| {
        if config.is_null() || key.is_null() {
            return Err(fail(DeclumpStatus::NullPointer, "config or key is null"));
        }
        let key = CStr::from_ptr(key)
            .to_str()
            .map_err(|_| fail(DeclumpStatus::InvalidArgument, "key is not UTF-8"))?;
        let mut doc = serde_json::to_value((*config).0).expect("config serialises");
        let fields = doc.as_object_mut().expect("config is a map");
        let slot = fields
            .get_mut(key)
            .ok_or_else(|| fail(DeclumpStatus::InvalidConfig, format!("unknown config key `{key}`")))?;
        *slot = if slot.is_u64() && value >= 0.0 && value.fract() == 0.0 {
            serde_json::Value::from(value as u64)
        } else {
            serde_json::Value::from(value)
        };
        let updated: Config = serde_json::from_value(doc)
            .map_err(|e| fail(DeclumpStatus::InvalidConfig, format!("`{key}`: {e}")))?;
        updated.validate().map_err(lib_err)?;
        (*config).0 = updated;
        Ok(())
    })
}

/// Partitions the clump outlined by `n_vertices` polygon points.
///
/// `image_values` is optional (null skips the image vote categories); when given
/// it holds `width * height` row-major intensities and sets the label frame.
///
/// # Safety
/// Pointers must reference buffers of the stated sizes; `config` may be null
/// for defaults. On success `*out` receives a handle for
/// `declump_result_free`.
#[no_mangle]
pub unsafe extern "C" fn declump_partition_polygon(
    config: *const DeclumpConfig,
    vertices: *const f64,
    n_vertices: usize,
    seeds: *const f64,
    n_seeds: usize,
    image_values: *const f64,
    width: usize,
    height: usize,
    out: *mut *mut DeclumpResult,
) -> DeclumpStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(DeclumpStatus::NullPointer, "out is null"));
        }
        *out = ptr::null_mut();
        let config = config_ref(config)?;
        let polygon = points(vertices, n_vertices, "vertices")?;
        let seeds = points(seeds, n_seeds, "seeds")?;
        let img = image(image_values, width, height)?;
        let result = partition_clump(&polygon, &seeds, img.as_ref(), &config).map_err(lib_err)?;
        store(out, result);
        Ok(())
    })
}

/// Partitions the pixels of a `width * height` row-major label raster that
/// carry `label`. `image_values`, when not null, has the same shape.
///
/// # Safety
/// As for `declump_partition_polygon`.
#[no_mangle]
pub unsafe extern "C" fn declump_partition_mask(
    config: *const DeclumpConfig,
    labels: *const u32,
    width: usize,
    height: usize,
    label: u32,
    seeds: *const f64,
    n_seeds: usize,
    image_values: *const f64,
    out: *mut *mut DeclumpResult,
) -> DeclumpStatus {
    guard(|| {
        if out.is_null() || labels.is_null() {
            return Err(fail(DeclumpStatus::NullPointer, "out or labels is null"));
        }
        *out = ptr::null_mut();
        let config = config_ref(config)?;
        let n = width
            .checked_mul(height)
            .ok_or_else(|| fail(DeclumpStatus::InvalidArgument, "mask size overflows"))?;
        let mask = LabelImage::from_vec(width, height, slice::from_raw_parts(labels, n).to_vec()).map_err(lib_err)?;
        let seeds = points(seeds, n_seeds, "seeds")?;
        let img = image(image_values, width, height)?;
        let result = partition_mask(&mask, label, &seeds, img.as_ref(), &config).map_err(lib_err)?;
        store(out, result);
        Ok(())
    })
}

/// # Safety
/// `result` must come from a partition call or be null.
#[no_mangle]
pub unsafe extern "C" fn declump_result_free(result: *mut DeclumpResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be a live handle or null (0 is returned).
#[no_mangle]
pub unsafe extern "C" fn declump_result_cut_count(result: *const DeclumpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.cuts.len())
}

/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn declump_result_cut(
    result: *const DeclumpResult,
    index: usize,
    out: *mut DeclumpCut,
) -> DeclumpStatus {
    guard(|| {
        let r = result
            .as_ref()
            .ok_or_else(|| fail(DeclumpStatus::NullPointer, "result is null"))?;
        if out.is_null() {
            return Err(fail(DeclumpStatus::NullPointer, "out is null"));
        }
        let c = r.0.cuts.get(index).ok_or_else(|| {
            fail(
                DeclumpStatus::OutOfRange,
                format!("cut {index} of {}", r.0.cuts.len()),
            )
        })?;
        let [a, b] = c.cut.points;
        *out = DeclumpCut {
            kind: match c.cut.kind() {
                CutKind::VertexVertex => DeclumpCutKind::VertexVertex,
                CutKind::VertexCenter => DeclumpCutKind::VertexCenter,
                CutKind::CenterCenter => DeclumpCutKind::CenterCenter,
            },
            x0: a.x,
            y0: a.y,
            x1: b.x,
            y1: b.y,
        };
        Ok(())
    })
}

/// # Safety
/// `result` must be a live handle or null (0 is returned).
#[no_mangle]
pub unsafe extern "C" fn declump_result_region_count(result: *const DeclumpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.regions.len())
}

/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn declump_result_frame(result: *const DeclumpResult, out: *mut DeclumpFrame) -> DeclumpStatus {
    guard(|| {
        let r = result
            .as_ref()
            .ok_or_else(|| fail(DeclumpStatus::NullPointer, "result is null"))?;
        if out.is_null() {
            return Err(fail(DeclumpStatus::NullPointer, "out is null"));
        }
        let l = &r.0.labels;
        *out = DeclumpFrame {
            origin_x: l.origin_x,
            origin_y: l.origin_y,
            width: l.width,
            height: l.height,
        };
        Ok(())
    })
}

/// Copies the label raster (0 outside the clump, regions numbered from 1)
/// into `out`, which must hold `width * height` values of the result frame.
///
/// # Safety
/// `result` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn declump_result_labels(result: *const DeclumpResult, out: *mut u32, len: usize) -> DeclumpStatus {
    guard(|| {
        let r = result
            .as_ref()
            .ok_or_else(|| fail(DeclumpStatus::NullPointer, "result is null"))?;
        if out.is_null() {
            return Err(fail(DeclumpStatus::NullPointer, "out is null"));
        }
        let data = &r.0.labels.data;
        if len < data.len() {
            return Err(fail(
                DeclumpStatus::OutOfRange,
                format!("buffer holds {len} values, need {}", data.len()),
            ));
        }
        ptr::copy_nonoverlapping(data.as_ptr(), out, data.len());
        Ok(())
    })
}
