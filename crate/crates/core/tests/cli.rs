use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn scwigner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scwigner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn grid_args<'a>(out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![
        "grid", "--n", "1", "--a", "2", "--g", "2", "--np", "9", "--nx", "11", "--out", out,
    ];
    v.extend_from_slice(extra);
    v
}

#[test]
fn grid_output_is_deterministic_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for f in [&first, &second] {
        let out = scwigner(&grid_args(f.to_str().unwrap(), &[]));
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = fs::read(&first).unwrap();
    assert_eq!(a, fs::read(&second).unwrap());
    assert_eq!(a.iter().filter(|&&c| c == b'\n').count(), 1 + 9 * 11);

    let meta: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("a.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["meta"]["n"], 1);
    assert_eq!(meta["meta"]["model"], "semiconfined");
    assert_eq!(meta["grid"]["np"], 9);
}

#[test]
fn field_vanishes_behind_the_wall() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("w.csv");
    let out = scwigner(&grid_args(
        f.to_str().unwrap(),
        &["--xmin", "-3", "--xmax", "3"],
    ));
    assert!(out.status.success());
    let text = fs::read_to_string(&f).unwrap();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        if v[1] <= -2.0 {
            assert_eq!(v[2], 0.0, "{line}");
        }
    }
}

#[test]
fn json_format() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("w.json");
    let out = scwigner(&grid_args(
        f.to_str().unwrap(),
        &["--format", "json", "--model", "canonical"],
    ));
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&f).unwrap()).unwrap();
    assert_eq!(v["values"].as_array().unwrap().len(), 11);
    assert_eq!(v["meta"]["model"], "canonical");
    assert!(!Path::new(&dir.path().join("w.meta.json")).exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let r = report.to_str().unwrap();

    assert_eq!(
        scwigner(&["verify", "--suite", "bogus", "--out", r])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        scwigner(&["grid", "--np", "0", "--out", r]).status.code(),
        Some(2)
    );
    assert_eq!(scwigner(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(scwigner(&["--help"]).status.code(), Some(0));
    assert_eq!(
        scwigner(&["grid", "--out", "/nonexistent-dir/x/y.csv"])
            .status
            .code(),
        Some(2)
    );

    let out = scwigner(&["verify", "--suite", "spot", "--out", r]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS spot"));
    let reports: serde_json::Value = serde_json::from_slice(&fs::read(&report).unwrap()).unwrap();
    assert_eq!(reports[0]["suite"], "spot");

    // An impossible tolerance makes verification fail with status 1.
    let out = scwigner(&["verify", "--suite", "spot", "--tol", "1e-30", "--out", r]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL spot"));
}

#[test]
fn fig1_writes_nine_panels() {
    let dir = tempfile::tempdir().unwrap();
    let out = scwigner(&[
        "fig1",
        "--np",
        "7",
        "--nx",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csvs = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .path()
                .extension()
                .is_some_and(|x| x == "csv")
        })
        .count();
    assert_eq!(csvs, 9);
    assert!(dir.path().join("fig1_a2_g0.csv").exists());
    assert!(dir.path().join("fig1_canonical_g4.meta.json").exists());
}

#[test]
fn limit_command_reports() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("limit.json");
    let out = scwigner(&[
        "limit",
        "--a",
        "5,10,20",
        "--np",
        "9",
        "--nx",
        "9",
        "--tol",
        "0.05",
        "--out",
        f.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let r: serde_json::Value = serde_json::from_slice(&fs::read(&f).unwrap()).unwrap();
    assert_eq!(r["checks"].as_array().unwrap().len(), 4);

    let out = scwigner(&["limit", "--a", "10,5"]);
    assert_eq!(out.status.code(), Some(2));
}
