use std::ffi::{CStr, CString};
use std::f64::consts::PI;
use std::ptr;

use declump_ffi::*;

/// Two overlapping disks of radius 20 with centres 30 apart.
fn dumbbell() -> (Vec<f64>, Vec<f64>) {
    let n = 360;
    let mut xy = Vec::new();
    // outline of the union: each disk's arc outside the other
    let reach = PI - (15.0f64 / 20.0).acos();
    for k in 0..n {
        let t = -reach + 2.0 * reach * k as f64 / n as f64;
        xy.extend([70.0 + 20.0 * t.cos(), 40.0 + 20.0 * t.sin()]);
    }
    for k in 0..n {
        let t = PI - reach + 2.0 * reach * k as f64 / n as f64;
        xy.extend([40.0 + 20.0 * t.cos(), 40.0 + 20.0 * t.sin()]);
    }
    (xy, vec![40.0, 40.0, 70.0, 40.0])
}

fn last_error() -> String {
    let p = declump_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn polygon_round_trip() {
    let (poly, seeds) = dumbbell();
    let mut out = ptr::null_mut();
    let s = unsafe {
        declump_partition_polygon(
            ptr::null(),
            poly.as_ptr(),
            poly.len() / 2,
            seeds.as_ptr(),
            2,
            ptr::null(),
            0,
            0,
            &mut out,
        )
    };
    assert_eq!(s, DeclumpStatus::Ok, "{}", last_error());
    unsafe {
        assert_eq!(declump_result_region_count(out), 2);
        assert_eq!(declump_result_cut_count(out), 1);
        let mut cut = DeclumpCut {
            kind: DeclumpCutKind::CenterCenter,
            x0: 0.0,
            y0: 0.0,
            x1: 0.0,
            y1: 0.0,
        };
        assert_eq!(declump_result_cut(out, 0, &mut cut), DeclumpStatus::Ok);
        assert_eq!(cut.kind, DeclumpCutKind::VertexVertex);
        assert!((cut.x0 - 55.0).abs() < 2.0 && (cut.x1 - 55.0).abs() < 2.0);
        assert_eq!(declump_result_cut(out, 1, &mut cut), DeclumpStatus::OutOfRange);
        assert!(last_error().contains("cut 1 of 1"));

        let mut frame = DeclumpFrame {
            origin_x: 0,
            origin_y: 0,
            width: 0,
            height: 0,
        };
        assert_eq!(declump_result_frame(out, &mut frame), DeclumpStatus::Ok);
        let mut labels = vec![0u32; frame.width * frame.height];
        assert_eq!(declump_result_labels(out, labels.as_mut_ptr(), 3), DeclumpStatus::OutOfRange);
        assert_eq!(
            declump_result_labels(out, labels.as_mut_ptr(), labels.len()),
            DeclumpStatus::Ok
        );
        assert_eq!(labels.iter().copied().max(), Some(2));
        declump_result_free(out);
    }
}

#[test]
fn mask_input() {
    let (w, h) = (40usize, 20usize);
    let mut mask = vec![0u32; w * h];
    for row in 4..16 {
        for col in 4..36 {
            mask[row * w + col] = 3;
        }
    }
    let seeds = [12.0, 10.0, 28.0, 10.0];
    let mut out = ptr::null_mut();
    let s = unsafe {
        declump_partition_mask(ptr::null(), mask.as_ptr(), w, h, 3, seeds.as_ptr(), 2, ptr::null(), &mut out)
    };
    assert_eq!(s, DeclumpStatus::Ok, "{}", last_error());
    unsafe {
        assert_eq!(declump_result_region_count(out), 2);
        declump_result_free(out);
    }
    let s = unsafe {
        declump_partition_mask(ptr::null(), mask.as_ptr(), w, h, 9, seeds.as_ptr(), 2, ptr::null(), &mut out)
    };
    assert_eq!(s, DeclumpStatus::InvalidBoundary);
    assert!(out.is_null());
}

#[test]
fn config_handles() {
    let cfg = declump_config_new();
    let key = |k: &str| CString::new(k).unwrap();
    unsafe {
        assert_eq!(declump_config_set(cfg, key("R_max").as_ptr(), 25.0), DeclumpStatus::Ok);
        assert!(declump_last_error().is_null());
        assert_eq!(declump_config_set(cfg, key("nope").as_ptr(), 1.0), DeclumpStatus::InvalidConfig);
        assert!(last_error().contains("nope"));
        assert_eq!(declump_config_set(cfg, key("Theta_min").as_ptr(), 200.0), DeclumpStatus::InvalidConfig);
        assert_eq!(declump_config_set(cfg, ptr::null(), 1.0), DeclumpStatus::NullPointer);

        let (poly, seeds) = dumbbell();
        let mut out = ptr::null_mut();
        let s = declump_partition_polygon(cfg, poly.as_ptr(), poly.len() / 2, seeds.as_ptr(), 2, ptr::null(), 0, 0, &mut out);
        assert_eq!(s, DeclumpStatus::Ok);
        declump_result_free(out);
        declump_config_free(cfg);
    }
}

#[test]
fn seed_errors() {
    let (poly, _) = dumbbell();
    let outside = [0.0, 0.0];
    let mut out = ptr::null_mut();
    let s = unsafe {
        declump_partition_polygon(ptr::null(), poly.as_ptr(), poly.len() / 2, outside.as_ptr(), 1, ptr::null(), 0, 0, &mut out)
    };
    assert_eq!(s, DeclumpStatus::InvalidSeeds);
    assert!(last_error().contains("not inside"));
    let s = unsafe { declump_partition_polygon(ptr::null(), poly.as_ptr(), poly.len() / 2, ptr::null(), 1, ptr::null(), 0, 0, &mut out) };
    assert_eq!(s, DeclumpStatus::NullPointer);
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        declump_result_free(ptr::null_mut());
        declump_config_free(ptr::null_mut());
        assert_eq!(declump_result_cut_count(ptr::null()), 0);
        assert_eq!(declump_result_region_count(ptr::null()), 0);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/declump.h")).unwrap();
    for name in [
        "declump_last_error",
        "declump_config_new",
        "declump_config_set",
        "declump_partition_polygon",
        "declump_partition_mask",
        "declump_result_cut",
        "declump_result_labels",
        "typedef struct DeclumpResult DeclumpResult;",
        "DECLUMP_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/declump.h");
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .status()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(status.success());
}
