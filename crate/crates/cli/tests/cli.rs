use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn steerkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steerkit"))
        .args(args)
        .env_remove("STEERKIT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = steerkit(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn rows(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes()).records().map(Result::unwrap).collect()
}

fn column(csv_text: &str, name: &str) -> usize {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    r.headers().unwrap().iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn num(r: &csv::StringRecord, i: usize) -> f64 {
    r[i].parse().unwrap()
}

/// First parameter value at which `pred` holds, scanning in order.
fn first(rows: &[&csv::StringRecord], param: usize, pred: impl Fn(&csv::StringRecord) -> bool) -> Option<f64> {
    rows.iter().find(|r| pred(r)).map(|r| num(r, param))
}

#[test]
fn hierarchy_between_steering_and_bell() {
    let r = json(&["analyze", "--family", "hierarchy", "--params", "0.65", "--axes", "1,0,0;0,0,1"]);
    assert_eq!(r["steering"]["steerable"], true);
    assert_eq!(r["bell"]["analog_chsh"]["violated"], false);
    assert_eq!(r["bell"]["chsh_violable"], "no");
    let v = r["bell"]["analog_chsh"]["value"].as_f64().unwrap();
    assert!((v - 2.0 * 2f64.sqrt() * 0.65).abs() < 1e-10);
    assert_eq!(r["sdp"]["restricted"]["status"], "infeasible");
    assert!(r["sdp"]["restricted"]["certificate"]["value"].as_f64().unwrap() < 0.0);
    assert!(r.get("one_way").is_none());
}

#[test]
fn one_way_example() {
    let r = json(&["analyze", "--family", "one_way", "--params", "0.8,0.05"]);
    assert_eq!(r["one_way"]["alice_to_bob_steerable"], true);
    assert_eq!(r["one_way"]["bob_to_alice_unsteerable"], true);
    assert_eq!(r["sdp"]["restricted"]["steerable"], true);
}

#[test]
fn product_state_is_negative_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("product.json");
    std::fs::write(
        &path,
        r#"{"alpha": [0, 0, 0.6], "beta": [0.3, 0, 0], "T": [[0, 0, 0], [0, 0, 0], [0.18, 0, 0]]}"#,
    )
    .unwrap();
    let r = json(&["analyze", "--state", path.to_str().unwrap(), "--policy", "fixed"]);
    assert_eq!(r["entanglement"]["entangled"], false);
    assert_eq!(r["bell"]["chsh_violable"], "no");
    assert_eq!(r["bell"]["chsh"]["violated"], false);
    assert_eq!(r["bell"]["analog_chsh"]["violated"], false);
    assert_eq!(r["steering"]["steerable"], false);
    assert_eq!(r["sdp"]["restricted"]["steerable"], false);
    assert_eq!(r["sdp"]["full"]["steerable"], false);
}

#[test]
fn report_keys_keep_their_order() {
    let text = ok(&["analyze", "--family", "bell_diagonal", "--params", "0.7,0.1,0.1,0.1", "--policy", "optimal"]);
    let keys = ["\"source\"", "\"state\"", "\"policy\"", "\"axes\"", "\"entanglement\"", "\"purity\"", "\"bell\"", "\"steering\"", "\"sdp\""];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn hierarchy_scan_recovers_both_thresholds() {
    let text = ok(&["scan", "--family", "hierarchy", "--grid", "s=0:1:1001"]);
    let all = rows(&text);
    assert_eq!(all.len(), 1001);
    let refs: Vec<&csv::StringRecord> = all.iter().collect();
    let (s, steer, sdp, bell) =
        (column(&text, "s"), column(&text, "steering"), column(&text, "sdp_status"), column(&text, "chsh_violable"));
    let step = 1e-3;
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let steer_at = first(&refs, s, |r| &r[steer] == "steerable").unwrap();
    let sdp_at = first(&refs, s, |r| &r[sdp] == "infeasible").unwrap();
    let bell_at = first(&refs, s, |r| &r[bell] == "yes").unwrap();
    assert!(steer_at >= golden && steer_at - golden <= step, "{steer_at}");
    assert!(sdp_at >= golden && sdp_at - golden <= step, "{sdp_at}");
    assert!(bell_at >= FRAC_1_SQRT_2 && bell_at - FRAC_1_SQRT_2 <= step, "{bell_at}");
    // monotone: once steerable, always steerable
    let idx = all.iter().position(|r| &r[steer] == "steerable").unwrap();
    assert!(all[idx..].iter().all(|r| &r[steer] == "steerable"));
}

fn condition_root(theta: f64) -> f64 {
    // smallest p in (1/2, 1] with cos²2θ < (2p − 1)/((2 − p)p³)
    let c = (2.0 * theta).cos().powi(2);
    let g = |p: f64| (2.0 * p - 1.0) / ((2.0 - p) * p * p * p) - c;
    let (mut lo, mut hi) = (0.5, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[test]
fn one_way_scan_boundaries() {
    let text = ok(&["scan", "--family", "one_way", "--grid", "p=0:1:201", "--grid", "theta=0.1:1.4:14", "--outputs", "S,margin"]);
    let all = rows(&text);
    assert_eq!(all.len(), 201 * 14);
    let (p, th) = (column(&text, "p"), column(&text, "theta"));
    let (steer, bell, cond) = (column(&text, "steering"), column(&text, "chsh_violable"), column(&text, "one_way_condition"));
    let step = 1.0 / 200.0;
    for k in 0..14 {
        let slice: Vec<&csv::StringRecord> = all.iter().filter(|r| (num(r, th) - (0.1 + 0.1 * k as f64)).abs() < 1e-9).collect();
        assert_eq!(slice.len(), 201);
        let theta = num(slice[0], th);
        let checks = [
            (first(&slice, p, |r| &r[steer] == "steerable"), FRAC_1_SQRT_2),
            (first(&slice, p, |r| &r[bell] == "yes"), 1.0 / (1.0 + (2.0 * theta).sin().powi(2)).sqrt()),
            (first(&slice, p, |r| &r[cond] == "false"), condition_root(theta)),
        ];
        for (i, (got, want)) in checks.into_iter().enumerate() {
            let got = got.unwrap_or(f64::INFINITY);
            assert!(got >= want - 1e-12 && got - want <= step, "theta {theta} boundary {i}: {got} vs {want}");
        }
    }
}

#[test]
fn random_scans_respect_concurrence_bounds() {
    let root2 = 2f64.sqrt();
    for (family, kind) in [("random", "mixed"), ("random", "pure"), ("bell_diagonal", "mixed")] {
        let text = ok(&["scan", "--family", family, "--kind", kind, "--grid", "n=3000", "--outputs", "C,S,S_M", "--seed", "5"]);
        let (c, s, sm) = (column(&text, "C"), column(&text, "S"), column(&text, "S_M"));
        let all = rows(&text);
        assert_eq!(all.len(), 3000);
        for r in &all {
            let (c, s, sm) = (num(r, c), num(r, s), num(r, sm));
            // 12 significant digits in the file
            let tol = 1e-9;
            assert!(2.0 * root2 * c <= s + tol && s <= 2.0 * (1.0 + c * c).sqrt() + tol);
            assert!(2.0 * root2 * c <= sm + tol && sm <= root2 * (1.0 + c) + tol);
            if kind == "pure" {
                assert!((s - 2.0 * (1.0 + c * c).sqrt()).abs() < 1e-8);
            }
            if family == "bell_diagonal" && c > 0.0 {
                assert!(s + tol >= 2.0 * root2 / 3.0 * (1.0 + 2.0 * c));
            }
        }
    }
}

#[test]
fn rank_one_correlations_have_no_optimal_axes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rank_one.json");
    std::fs::write(&path, r#"{"alpha": [0, 0, 0], "beta": [0, 0, 0], "T": [[0, 0, 0], [0, 0, 0], [0, 0, 1]]}"#).unwrap();
    let out = steerkit(&["analyze", "--state", path.to_str().unwrap(), "--policy", "optimal"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn crosscheck_agrees_and_rejects_empty_runs() {
    let s = json(&["crosscheck", "--n", "300", "--seed", "11"]);
    assert_eq!(s["disagreements"], 0);
    assert_eq!(s["n"], 300);
    let total = s["agreements"].as_u64().unwrap() + s["boundary"].as_u64().unwrap();
    assert_eq!(total, 300);
    assert!(s["steerable"].as_u64().unwrap() > 0);
    assert_eq!(steerkit(&["crosscheck", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn fixed_seed_is_bit_exact() {
    let scan = ["scan", "--family", "random", "--grid", "n=500", "--seed", "42", "--policy", "optimal"];
    assert_eq!(ok(&scan), ok(&scan));
    let other = ok(&["scan", "--family", "random", "--grid", "n=500", "--seed", "43", "--policy", "optimal"]);
    assert_ne!(ok(&scan), other);
    let cross = ["crosscheck", "--n", "100", "--seed", "3"];
    assert_eq!(ok(&cross), ok(&cross));
    let sample = ["sample", "--family", "hierarchy", "--params", "0.9", "--policy", "optimal", "--shots", "20000", "--seed", "9"];
    assert_eq!(steerkit(&sample).stdout, steerkit(&sample).stdout);
}

#[test]
fn sample_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    ok(&["sample", "--family", "hierarchy", "--params", "0.9", "--policy", "optimal", "--shots", "1000000", "--seed", "1", "--out", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    let all = rows(&text);
    assert_eq!(all.len(), 4);
    for r in &all {
        let counts: u64 = (9..13).map(|i| r[i].parse::<u64>().unwrap()).sum();
        assert_eq!(counts, 1_000_000);
        assert!((num(r, 15) - num(r, 18)).abs() < 0.005);
    }
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.summary.json")).unwrap()).unwrap();
    let sampled = summary["sampled"]["analog_chsh"].as_f64().unwrap();
    assert!((sampled - 2.0 * 2f64.sqrt() * 0.9).abs() < 0.01);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_steerkit"))
        .args(["scan", "--family", "hierarchy", "--grid", "s=0:1:11"])
        .env("STEERKIT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(dir.path().join("scan_hierarchy.csv")).unwrap();
    assert_eq!(rows(&written).len(), 11);
}

#[test]
fn validation_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"alpha\": [0, 0]}").unwrap();
    let not_psd = dir.path().join("not_psd.json");
    std::fs::write(&not_psd, r#"{"alpha": [1, 0, 0], "beta": [1, 0, 0], "T": [[-1, 0, 0], [0, 0, 0], [0, 0, 0]]}"#).unwrap();
    let missing = Path::new("/nonexistent/state.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["analyze", "--state", bad.to_str().unwrap()],
        vec!["analyze", "--state", not_psd.to_str().unwrap()],
        vec!["analyze", "--state", missing.to_str().unwrap()],
        vec!["analyze", "--family", "hierarchy", "--params", "1.5"],
        vec!["analyze", "--family", "one_way", "--params", "0.8"],
        vec!["analyze", "--family", "hierarchy", "--params", "0.5", "--axes", "0,0,0;1,0,0"],
        vec!["analyze", "--family", "hierarchy", "--params", "0.5", "--axes", "1,0,0;0,0,1;1,0,0"],
        vec!["scan", "--family", "one_way", "--grid", "p=0:1:5", "--grid", "theta=0:1:5"],
        vec!["scan", "--family", "hierarchy", "--grid", "s=0:1"],
        vec!["sample", "--family", "hierarchy", "--params", "0.5", "--shots", "0"],
        vec!["scan", "--family", "hierarchy"],
    ];
    for c in cases {
        assert_eq!(steerkit(&c).status.code(), Some(2), "{c:?}");
    }
}
