//! End-to-end tests of the `cbit-recovery` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cbit-recovery");
const HEADER: &str = "alpha,beta_opt,k_opt,k_prime_opt,f_bar,f_noop,f_classical";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
        .unwrap_or_else(|| panic!("missing {key} in {text}"))
        .parse()
        .unwrap()
}

fn polyline_series(path: &Path) -> Vec<String> {
    let text = fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed SVG");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.attribute("viewBox"), Some("0 0 800 600"));
    root.descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .map(|n| n.attribute("data-series").expect("series name").to_string())
        .collect()
}

#[test]
fn sweep_writes_csv_with_exact_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = run(&["sweep", "--alpha-min", "0", "--alpha-max", "1", "--steps", "101", "-o", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));

    let text = fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 102);

    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert_eq!(first[4], 0.75);
    for line in &lines[1..] {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(f.len(), 7);
        assert!(f[4] >= f[5].max(f[6]) - 1e-9, "{line}");
        for field in line.split(',') {
            let digits = field
                .split(['e', 'E'])
                .next()
                .unwrap()
                .chars()
                .filter(char::is_ascii_digit)
                .collect::<String>();
            assert!(digits.trim_start_matches('0').len() <= 10, "{field}");
        }
    }
}

#[test]
fn sweep_without_output_prints_csv() {
    let out = run(&["sweep", "--steps", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some(HEADER));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn svg_figures_are_well_formed_with_declared_series() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = run(&["sweep", "--format", "svg", "-o", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(csv.exists());

    let fig1 = polyline_series(&dir.path().join("fig1.svg"));
    assert_eq!(fig1, ["f_bar", "f_noop"]);
    let fig2 = polyline_series(&dir.path().join("fig2.svg"));
    assert_eq!(fig2, ["beta_opt", "beta_opt"], "beta_opt drawn with one break");

    let fig1_text = fs::read_to_string(dir.path().join("fig1.svg")).unwrap();
    let doc = roxmltree::Document::parse(&fig1_text).unwrap();
    for line in doc.descendants().filter(|n| n.has_tag_name("polyline")) {
        let dashed = line.attribute("stroke-dasharray").is_some();
        assert_eq!(dashed, line.attribute("data-series") == Some("f_noop"));
    }
}

#[test]
fn svg_without_output_path_is_usage_error() {
    let out = run(&["sweep", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn optimize_reports_key_value_lines() {
    let out = run(&["optimize", "--alpha", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!((value(&text, "beta_opt") - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    assert_eq!(value(&text, "k_opt"), 0.75);
    assert_eq!(value(&text, "k_prime_opt"), 0.75);
    assert!((value(&text, "f_bar") - 0.7916666667).abs() < 1e-10);
    assert!(text.contains("branch=boundary_beta"));

    let out = run(&["optimize", "--alpha", "1.0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(value(&text, "f_bar"), 1.0);
    assert_eq!(value(&text, "k_opt"), 0.0);
}

#[test]
fn invalid_alpha_is_usage_error() {
    for alpha in ["1.5", "-0.1", "nan"] {
        let out = run(&["optimize", "--alpha", alpha]);
        assert_eq!(out.status.code(), Some(2), "alpha {alpha}");
        assert!(!stderr(&out).is_empty());
    }
    let out = run(&["sweep", "--alpha-min", "0.8", "--alpha-max", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["sweep", "--steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_fails() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("missing").join("out.csv");
    let out = run(&["sweep", "--steps", "3", "-o", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot write"));
}

#[test]
fn kink_is_found_on_default_range() {
    let out = run(&["kink"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let alpha = value(&text, "alpha_kink");
    let beta = value(&text, "beta_jump_to");
    assert!((0.52..=0.56).contains(&alpha), "{alpha}");
    assert!((1.05..=1.15).contains(&beta), "{beta}");
    assert!(value(&text, "bracket_width") < 1e-4);
}

#[test]
fn kink_absent_below_jump() {
    let out = run(&["kink", "--alpha-min", "0", "--alpha-max", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no kink found"));
}

#[test]
fn verify_requires_seed_when_sampling() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = ["verify", "--mc-samples", "20000", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 10);
    assert!(!text.contains("FAIL "));
}

#[test]
fn verify_flags_injected_broken_channel() {
    let out = run(&["verify", "--mc-samples", "0", "--inject-broken-channel"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL cp_recovery_channels"));
    assert!(stderr(&out).contains("verification failed: cp_recovery_channels"));
}

#[test]
fn sweep_csv_is_byte_stable() {
    let a = run(&["sweep", "--steps", "51"]);
    let b = run(&["sweep", "--steps", "51"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
