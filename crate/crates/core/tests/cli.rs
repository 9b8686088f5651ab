use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn declump(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_declump")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn dumbbell(dir: &Path) {
    let mut s = String::from("vertices:\n");
    let reach = std::f64::consts::PI - (15.0f64 / 20.0).acos();
    for (cx, start) in [(70.0, -reach), (40.0, std::f64::consts::PI - reach)] {
        for k in 0..200 {
            let t = start + 2.0 * reach * k as f64 / 200.0;
            s += &format!("  - [{}, {}]\n", cx + 20.0 * t.cos(), 40.0 + 20.0 * t.sin());
        }
    }
    fs::write(dir.join("poly.yaml"), s).unwrap();
    fs::write(dir.join("seeds.yaml"), "seeds:\n  - [40, 40]\n  - [70, 40]\n").unwrap();
}

#[test]
fn synth_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let cases = dir.path().join("cases");
    let o = declump(&["synth", "--out", path(&cases), "--count", "6", "--rng-seed", "9"]);
    assert!(o.status.success());
    assert_eq!(fs::read_dir(&cases).unwrap().count(), 6);
    assert!(cases.join("case-0003/case.yaml").is_file());

    let o = declump(&["validate", path(&cases), "--jobs", "2"]);
    assert!(o.status.success());
    let line = stdout(&o);
    let frac = line.trim();
    assert_eq!(frac.len(), 5, "{frac}");
    assert!(frac.parse::<f64>().unwrap() <= 1.0);
}

#[test]
fn batch_outputs_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cases = dir.path().join("cases");
    assert!(declump(&["synth", "--out", path(&cases), "--count", "5"]).status.success());
    let mut reports = Vec::new();
    for jobs in ["1", "3"] {
        let out = dir.path().join(format!("out{jobs}"));
        let o = declump(&["batch", path(&cases), "--out", path(&out), "--jobs", jobs, "--svg", "--emit-mask"]);
        assert!(o.status.success());
        assert!(stdout(&o).starts_with("correct fraction: "));
        assert!(out.join("case-0004/overlay.svg").is_file());
        assert!(out.join("case-0004/labels.pgm").is_file());
        reports.push(fs::read(out.join("report.json")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn partition_polygon_to_stdout_and_dir() {
    let dir = tempfile::tempdir().unwrap();
    dumbbell(dir.path());
    let (poly, seeds) = (dir.path().join("poly.yaml"), dir.path().join("seeds.yaml"));
    let o = declump(&["partition", "--boundary", path(&poly), "--seeds", path(&seeds)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["cuts"].as_array().unwrap().len(), 1);
    assert_eq!(doc["cuts"][0]["kind"], "vertex-vertex");
    assert_eq!(doc["regions"].as_array().unwrap().len(), 2);

    let out = dir.path().join("out");
    let o = declump(&["partition", "--boundary", path(&poly), "--seeds", path(&seeds), "--out", path(&out), "--svg", "--emit-mask"]);
    assert!(o.status.success());
    let svg = fs::read_to_string(out.join("overlay.svg")).unwrap();
    assert!(svg.contains(r#"class="vv""#));
    assert!(fs::read(out.join("labels.pgm")).unwrap().starts_with(b"P5"));
    let again = dir.path().join("again");
    declump(&["partition", "--boundary", path(&poly), "--seeds", path(&seeds), "--out", path(&again), "--svg"]);
    assert_eq!(fs::read(out.join("overlay.svg")).unwrap(), fs::read(again.join("overlay.svg")).unwrap());
    assert_eq!(fs::read(out.join("cuts.json")).unwrap(), fs::read(again.join("cuts.json")).unwrap());
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    dumbbell(dir.path());
    let cfg = dir.path().join("cfg.yaml");
    fs::write(&cfg, "R_max: 35\nmystery: 1\n").unwrap();
    let o = declump(&[
        "partition",
        "--boundary",
        path(&dir.path().join("poly.yaml")),
        "--seeds",
        path(&dir.path().join("seeds.yaml")),
        "--config",
        path(&cfg),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mystery"));

    fs::write(dir.path().join("far.yaml"), "seeds:\n  - [500, 500]\n").unwrap();
    let o = declump(&[
        "partition",
        "--boundary",
        path(&dir.path().join("poly.yaml")),
        "--seeds",
        path(&dir.path().join("far.yaml")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: seed 0"));
}
