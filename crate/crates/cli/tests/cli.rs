use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn steinhaus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinhaus"))
        .args(args)
        .env_remove("STEINHAUS_BUDGET")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn two_point_seed_halves_the_distance() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "two.json", &json!({"kind": "points", "dimension": 1, "points": [["-2"], ["2"]]}));
    let out = steinhaus(&["iterate", "--input", &f, "--iters", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,vol_inner,vol_outer,dH,dH_err,r_ball,diam\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        let dh: f64 = row[3].parse().unwrap();
        assert_eq!(dh, 4.0 / f64::powi(2.0, i as i32 + 2));
        assert_eq!(row[4], "0");
    }
}

#[test]
fn square_seed_inner_volume_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let cells: Vec<[i64; 2]> = (0..4).flat_map(|x| (0..4).map(move |y| [x, y])).collect();
    let f = write(dir.path(), "sq.json", &json!({"kind": "grid", "dimension": 2, "h": "1/4", "cells": cells}));
    let out = steinhaus(&["iterate", "--input", &f, "--iters", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let vols: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(vols.len(), 5);
    assert!(vols.windows(2).all(|w| w[0] <= w[1]), "{vols:?}");
}

#[test]
fn invalid_input_exits_2_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    let out_dir = dir.path().join("out");
    let out = steinhaus(&["iterate", "--input", bad.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());

    let empty = write(dir.path(), "empty.json", &json!({"kind": "grid", "dimension": 2, "h": "1/8", "cells": []}));
    let out = steinhaus(&["radius", "--input", &empty, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());

    assert_eq!(steinhaus(&["iterate"]).status.code(), Some(2));
}

#[test]
fn budget_exit_keeps_the_partial_trace() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tri.json", &json!({"kind": "points", "dimension": 2, "points": [[0, 0], [3, 1], [1, 2]]}));
    let out_dir = dir.path().join("out");
    let out = Command::new(env!("CARGO_BIN_EXE_steinhaus"))
        .args(["iterate", "--input", &f, "--iters", "8", "--budget", "100000000", "--out", out_dir.to_str().unwrap()])
        .env("STEINHAUS_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let trace: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("trace.json")).unwrap()).unwrap();
    let n = trace["records"].as_array().unwrap().len();
    assert!((1..8).contains(&n), "{n} records");
}

#[test]
fn rectangle_radius_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "rect.json",
        &json!({"kind": "polytope", "dimension": 2, "vertices": [["0", "0"], ["2", "0"], ["2", "1"], ["0", "1"]]}),
    );
    let out = steinhaus(&["radius", "--input", &f, "--resolution", "1/16"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let bound = v["theorem1"]["bound"].as_f64().unwrap();
    assert!((bound - 1.0 / 5f64.sqrt()).abs() < 0.05, "{bound}");
    assert!(v["theorem1"]["truth_lower"].as_f64().unwrap() <= 1.0);
    assert!(v["theorem1"]["truth_upper"].as_f64().unwrap() >= 1.0 - 0.1);
    assert!(v["theorem2"]["bound"].as_f64().unwrap() >= bound);
}

#[test]
fn triangle_shape_row() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "tri.json",
        &json!({"kind": "polytope", "dimension": 2, "vertices": [[0, 0], [1, 0], [0.5, 0.8660254037844386]]}),
    );
    let out = steinhaus(&["shape", "--input", &f, "--mode", "float"]);
    assert!(out.status.success());
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let x: f64 = rows[0][7].parse().unwrap();
    let y: f64 = rows[0][8].parse().unwrap();
    assert!((x - 0.5).abs() < 1e-9 && (y - 3f64.sqrt() / 2.0).abs() < 1e-9, "({x}, {y})");
}

#[test]
fn non_convex_polygon_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "dart.json",
        &json!({"kind": "polytope", "dimension": 2, "vertices": [["0", "0"], ["2", "0"], ["1", "1/2"], ["1", "2"]]}),
    );
    let out = steinhaus(&["shape", "--input", &f]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not convex"));
}

#[test]
fn shape_directory_gives_one_row_per_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let mut state = 0x2545f4914f6cdd1du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for i in 0..100 {
        // Points on an ellipse at increasing angles are in convex position.
        let n = 3 + (next() * 6.0) as usize;
        let b = 0.2 + 0.8 * next();
        let mut angles: Vec<f64> = (0..n).map(|_| next() * std::f64::consts::TAU).collect();
        angles.sort_by(f64::total_cmp);
        let verts: Vec<[f64; 2]> = angles.iter().map(|a| [a.cos(), b * a.sin()]).collect();
        write(dir.path(), &format!("p{i:03}.json"), &json!({"kind": "polytope", "dimension": 2, "vertices": verts}));
    }
    let out_dir = dir.path().join("out");
    let out = steinhaus(&[
        "shape",
        "--input",
        dir.path().to_str().unwrap(),
        "--mode",
        "float",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&fs::read_to_string(out_dir.join("shape.csv")).unwrap());
    assert_eq!(rows.len(), 100);
    for r in rows {
        let (x, y): (f64, f64) = (r[7].parse().unwrap(), r[8].parse().unwrap());
        assert!((0.0..=1.0).contains(&x) && (0.0..=1.0 + 1e-12).contains(&y), "{r:?}");
    }
}

#[test]
fn exported_sets_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sets = [
        json!({"schema_version": 1, "kind": "intervals", "dimension": 1, "intervals": [["-1/2", "1/3"], ["2", "2"]]}),
        json!({"schema_version": 1, "kind": "points", "dimension": 2, "points": [["0", "1/2"], ["3/4", "-1"]]}),
        json!({"schema_version": 1, "kind": "polytope", "dimension": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"]]}),
    ];
    for (i, s) in sets.iter().enumerate() {
        let f = write(dir.path(), &format!("s{i}.json"), s);
        let once = steinhaus(&["export", "--input", &f]);
        assert!(once.status.success());
        let v: Value = serde_json::from_slice(&once.stdout).unwrap();
        let g = write(dir.path(), &format!("t{i}.json"), &v);
        let twice = steinhaus(&["export", "--input", &g]);
        assert_eq!(once.stdout, twice.stdout);
    }
    // A rasterized sandwich survives the round trip too.
    let f = dir.path().join("s2.json");
    let once = steinhaus(&["export", "--input", f.to_str().unwrap(), "--resolution", "1/8"]);
    let v: Value = serde_json::from_slice(&once.stdout).unwrap();
    assert!(v.get("inner_cells").is_some());
    let g = write(dir.path(), "t.json", &v);
    assert_eq!(steinhaus(&["export", "--input", &g]).stdout, once.stdout);
}

#[test]
fn svg_is_a_side_channel() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "l.json", &json!({"kind": "grid", "dimension": 2, "h": "1/2", "cells": [[0, 0], [1, 0], [0, 1]]}));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(steinhaus(&["iterate", "--input", &f, "--iters", "3", "--out", a.to_str().unwrap()]).status.success());
    assert!(steinhaus(&["iterate", "--input", &f, "--iters", "3", "--svg", "--out", b.to_str().unwrap()]).status.success());
    assert_eq!(fs::read(a.join("trace.csv")).unwrap(), fs::read(b.join("trace.csv")).unwrap());
    for n in 0..=3 {
        let svg = fs::read_to_string(b.join(format!("K_{n}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<rect x="));
    }
    assert!(!a.join("K_1.svg").exists());
}

#[test]
fn verify_subset_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for run in ["a", "b"] {
        let out_dir = dir.path().join(run);
        let out = steinhaus(&["verify", "--only", "two-point", "--seed", "7", "--out", out_dir.to_str().unwrap()]);
        assert!(out.status.success());
        let mut v: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("verify.json")).unwrap()).unwrap();
        let results = v["criteria"].as_array_mut().unwrap();
        assert_eq!(results.len(), 1);
        for r in results {
            r.as_object_mut().unwrap().remove("elapsed_s");
        }
        reports.push(v);
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(steinhaus(&["verify", "--only", "no-such-check"]).status.code(), Some(2));
}
