use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use histspline_cli::{cmd_estimate, io, EstimateOverrides, GeneratorOverrides, RunConfig};
use serde_json::Value;
use tempfile::TempDir;

fn histspline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_histspline"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn summary(out: &Output) -> Value {
    let stdout = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(stdout.lines().last().expect("a summary line")).unwrap()
}

fn small_corpus(dir: &Path) -> PathBuf {
    let out = histspline(&["generate", "--count", "50", "--seed", "7", "--out-dir", path_str(dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    dir.join("corpus.csv")
}

fn estimate(input: &Path, out_dir: &Path, bc: &str) -> Output {
    histspline(&[
        "estimate",
        "--input",
        path_str(input),
        "--bc",
        bc,
        "--out-dir",
        path_str(out_dir),
    ])
}

#[test]
fn generate_writes_default_corpus() {
    let dir = TempDir::new().unwrap();
    let out = histspline(&["generate", "--out-dir", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let ids = io::read_columns(&dir.path().join("corpus.csv"), &["series_id"]).unwrap();
    let mut ids = ids[0].clone();
    ids.dedup();
    assert_eq!(ids.len(), 1000);
    let s = summary(&out);
    assert_eq!(s["series"], 1000);
    assert!(s["min_x_end"].as_f64().unwrap() > 65.0);
}

#[test]
fn zero_count_is_a_usage_error_and_writes_nothing() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("out");
    let out = histspline(&["generate", "--count", "0", "--out-dir", path_str(&target)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!target.exists());
}

#[test]
fn bad_flags_exit_with_usage_code() {
    assert_eq!(histspline(&["estimate", "--rule", "bogus", "--generate"]).status.code(), Some(1));
    assert_eq!(histspline(&["estimate", "--bc", "periodic", "--generate"]).status.code(), Some(1));
    assert_eq!(histspline(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(histspline(&["estimate"]).status.code(), Some(1));
    assert_eq!(histspline(&["--help"]).status.code(), Some(0));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let input = small_corpus(dir.path());
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    assert!(estimate(&input, &first, "natural").status.success());
    assert!(estimate(&input, &second, "natural").status.success());
    for file in ["histogram.csv", "pdf.csv"] {
        assert_eq!(
            std::fs::read(first.join(file)).unwrap(),
            std::fs::read(second.join(file)).unwrap(),
            "{file}"
        );
    }
    let regenerated = dir.path().join("again");
    small_corpus(&regenerated);
    assert_eq!(std::fs::read(&input).unwrap(), std::fs::read(regenerated.join("corpus.csv")).unwrap());
}

#[test]
fn clamped_curve_vanishes_at_both_ends() {
    let dir = TempDir::new().unwrap();
    let input = small_corpus(dir.path());
    let out = estimate(&input, &dir.path().join("c"), "clamped");
    assert!(out.status.success());
    let curve = io::read_curve(&dir.path().join("c/pdf.csv")).unwrap();
    assert!(curve[0].1.abs() <= 1e-12);
    assert!(curve[curve.len() - 1].1.abs() <= 1e-12);
    assert_eq!(curve.len(), 1001);
}

#[test]
fn natural_has_at_least_as_many_turning_points_as_not_a_knot() {
    let dir = TempDir::new().unwrap();
    let input = small_corpus(dir.path());
    let nat = summary(&estimate(&input, &dir.path().join("nat"), "natural"));
    let nak = summary(&estimate(&input, &dir.path().join("nak"), "not-a-knot"));
    assert!(nat["turning_points"].as_u64() >= nak["turning_points"].as_u64());
}

#[test]
fn empty_and_malformed_inputs_are_data_errors() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(estimate(&empty, dir.path(), "natural").status.code(), Some(2));

    let header_only = dir.path().join("header.csv");
    std::fs::write(&header_only, "x\n").unwrap();
    assert_eq!(estimate(&header_only, dir.path(), "natural").status.code(), Some(2));

    let garbage = dir.path().join("garbage.csv");
    std::fs::write(&garbage, "x\n1.0\nfoo\n").unwrap();
    let out = estimate(&garbage, dir.path(), "natural");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let missing = dir.path().join("nope.csv");
    assert_eq!(estimate(&missing, dir.path(), "natural").status.code(), Some(2));
}

#[test]
fn constant_data_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let flat = dir.path().join("flat.csv");
    std::fs::write(&flat, "x\n2\n2\n2\n").unwrap();
    assert_eq!(estimate(&flat, dir.path(), "natural").status.code(), Some(2));
}

#[test]
fn compare_with_itself_is_zero() {
    let dir = TempDir::new().unwrap();
    let input = small_corpus(dir.path());
    assert!(estimate(&input, &dir.path().join("n"), "natural").status.success());
    let curve = dir.path().join("n/pdf.csv");
    let out = histspline(&["compare", path_str(&curve), path_str(&curve)]);
    assert!(out.status.success());
    let r = summary(&out);
    assert!(r["kl_ab"].as_f64().unwrap().abs() <= 1e-9);
    assert!(r["kl_ba"].as_f64().unwrap().abs() <= 1e-9);
}

#[test]
fn compare_natural_and_not_a_knot() {
    let dir = TempDir::new().unwrap();
    let input = small_corpus(dir.path());
    assert!(estimate(&input, &dir.path().join("nat"), "natural").status.success());
    assert!(estimate(&input, &dir.path().join("nak"), "not-a-knot").status.success());
    let out = histspline(&[
        "compare",
        path_str(&dir.path().join("nat/pdf.csv")),
        path_str(&dir.path().join("nak/pdf.csv")),
    ]);
    assert!(out.status.success());
    let r = summary(&out);
    let (ab, ba) = (r["kl_ab"].as_f64().unwrap(), r["kl_ba"].as_f64().unwrap());
    // the two end conditions only differ near the support ends
    assert!(ab > 0.0 && ab < 1e-3, "{ab}");
    assert!(ba > 0.0 && ba < 1e-3, "{ba}");
}

#[test]
fn compare_disjoint_curves_fails() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    std::fs::write(&a, "u,pdf\n0,1\n1,1\n").unwrap();
    std::fs::write(&b, "u,pdf\n2,1\n3,1\n").unwrap();
    let out = histspline(&["compare", path_str(&a), path_str(&b)]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn emitted_config_round_trips_through_the_binary() {
    let dir = TempDir::new().unwrap();
    let out = histspline(&[
        "estimate",
        "--emit-config",
        "--generate",
        "--count",
        "20",
        "--rule",
        "sturges",
        "--bc",
        "natural",
        "--out-dir",
        path_str(&dir.path().join("run")),
    ]);
    assert!(out.status.success());
    assert!(!dir.path().join("run").exists());
    let config = dir.path().join("run.toml");
    std::fs::write(&config, &out.stdout).unwrap();

    let from_file = histspline(&["estimate", "--config", path_str(&config)]);
    assert!(from_file.status.success(), "{}", String::from_utf8_lossy(&from_file.stderr));
    let file_summary = String::from_utf8(from_file.stdout).unwrap();

    let est = EstimateOverrides {
        generate: Some(true),
        rule: Some("sturges".into()),
        bc: Some("natural".into()),
        ..Default::default()
    };
    let gen = GeneratorOverrides {
        count: Some(20),
        ..Default::default()
    };
    let in_process_dir = dir.path().join("direct");
    let run = RunConfig::resolve(None, Some(&in_process_dir), &gen, &est);
    let direct = cmd_estimate(&run, &mut Vec::new()).unwrap();
    // compared as text: serde_json's default float parsing is not exact
    assert_eq!(file_summary.trim_end(), serde_json::to_string(&direct).unwrap());
    assert_eq!(
        std::fs::read(dir.path().join("run/pdf.csv")).unwrap(),
        std::fs::read(in_process_dir.join("pdf.csv")).unwrap()
    );
}

#[test]
fn flags_override_the_config_file() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("c.toml");
    std::fs::write(&config, "[generator]\ncount = 5\nseed = 1\n[estimate]\nrule = \"sturges\"\n").unwrap();
    let out = histspline(&["generate", "--config", path_str(&config), "--seed", "2", "--emit-config"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("count = 5"));
    assert!(text.contains("seed = 2"));

    std::fs::write(&config, "[estimate]\nbins = 3\n").unwrap();
    assert_eq!(histspline(&["generate", "--config", path_str(&config)]).status.code(), Some(1));
}
