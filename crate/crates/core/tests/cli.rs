use std::fs;
use std::process::Command;

use clap::Parser;

use touchard::cli::{run, Cli, Outcome, Report, RunConfig};

fn exec(args: &[&str]) -> Outcome {
    let cli = Cli::try_parse_from(std::iter::once("touchard").chain(args.iter().copied())).unwrap();
    run(&RunConfig::from_cli(&cli).unwrap()).unwrap()
}

fn json(args: &[&str]) -> Report {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&exec(&full).output).unwrap()
}

fn field(r: &Report, name: &str) -> String {
    r.rows.iter().find(|row| row[0] == name).unwrap()[1].clone()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn eval_positive_axis_cell() {
    let r = json(&["eval", "--n", "20", "--x", "20"]);
    assert!((num(&field(&r, "exact_re")) / 1.46396e10 - 1.0).abs() < 5e-6);
    assert!((num(&field(&r, "relative_error")) / 3.146e-6 - 1.0).abs() < 0.05);
}

#[test]
fn eval_complex_point() {
    let r = json(&["eval", "--n", "50", "--x", "5", "--theta-over-pi", "0.25"]);
    assert!((num(&field(&r, "asymptotic_re")) / 1.42492e-4 - 1.0).abs() < 5e-6);
    assert!((num(&field(&r, "exact_im")) / -9.15007e-5 - 1.0).abs() < 5e-6);
}

#[test]
fn eval_first_polynomial() {
    let r = json(&["eval", "--n", "2", "--x", "1"]);
    assert_eq!(num(&field(&r, "exact_re")), 1.0);
}

#[test]
fn json_round_trip_is_exact() {
    for args in [&["eval", "--n", "30", "--x", "3"][..], &["table", "--id", "4"][..]] {
        let mut full = args.to_vec();
        full.extend(["--format", "json", "--precision", "9"]);
        let text = exec(&full).output;
        let report: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(report.render(touchard::cli::OutputFormat::Json), text);
        let style = touchard::cli::NumberStyle {
            digits: 9,
            format: touchard::cli::OutputFormat::Json,
        };
        for cell in report.rows.iter().flatten() {
            if cell.contains('e') {
                if let Ok(v) = cell.parse::<f64>() {
                    assert_eq!(&style.real(v), cell);
                }
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    for args in [&["table", "--id", "5"][..], &["saddles", "--mu", "4", "--theta-over-pi", "0.3"][..]] {
        assert_eq!(exec(args).output, exec(args).output);
    }
}

#[test]
fn csv_output_shape() {
    let out = exec(&["table", "--id", "8", "--format", "csv"]).output;
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "s,c_2s,printed,relative_deviation");
    assert_eq!(lines.len(), 11);
    assert!(!out.contains('\r'));
}

#[test]
fn saddles_on_negative_axis() {
    let r = json(&["saddles", "--mu", "4", "--theta-over-pi", "1"]);
    let flagged: Vec<i64> = r
        .rows
        .iter()
        .filter(|row| row[7] == "yes")
        .map(|row| row[0].parse().unwrap())
        .collect();
    assert_eq!(flagged, vec![-1, 0, 1, 2]);
}

#[test]
fn saddles_window_and_table_rows() {
    let r = json(&["saddles", "--mu", "2.718281828459045", "--k-min", "0", "--k-max", "0"]);
    assert_eq!(r.rows.len(), 1);
    assert!((num(&r.rows[0][1]) - 1.0).abs() < 1e-12);
    let r = json(&["saddles", "--mu", "2", "--k-min", "1", "--k-max", "3"]);
    let expected = [(-0.83431, 4.53027), (-1.70226, 10.83981), (-2.15691, 17.15368)];
    for (row, (re, im)) in r.rows.iter().zip(expected) {
        assert!((num(&row[1]) - re).abs() < 1e-5 && (num(&row[2]) - im).abs() < 1e-5);
    }
}

#[test]
fn stokes_angles() {
    for (mu, expected) in [("3", 0.97162), ("6", 0.23093)] {
        let r = json(&["stokes", "--mu", mu]);
        assert!((num(&r.rows[0][4]) - expected).abs() < 1e-4);
    }
    let r = json(&["stokes", "--boundaries"]);
    assert_eq!(r.rows.len(), 8);
    let mu: Vec<f64> = r.rows.iter().map(|row| num(&row[1])).collect();
    assert!(mu.windows(2).all(|w| w[0] < w[1]));
}

fn manifest(dir: &std::path::Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn paths_keep_the_level_and_reach_left_infinity() {
    let dir = tempfile::tempdir().unwrap();
    exec(&["paths", "--mu", "4", "--out-dir", dir.path().to_str().unwrap()]);
    let m = manifest(dir.path());
    for k in [-1, 1] {
        let left = m["paths"].as_array().unwrap().iter().any(|p| {
            p["k"] == k && p["direction"] == "descent" && p["terminal"] == "left_infinity"
        });
        assert!(left, "k = {k}");
    }
    for p in m["paths"].as_array().unwrap() {
        let mut rd = csv::Reader::from_path(dir.path().join(p["file"].as_str().unwrap())).unwrap();
        assert_eq!(rd.headers().unwrap(), vec!["re", "im", "re_psi", "im_psi"]);
        let levels: Vec<f64> = rd.records().map(|r| num(&r.unwrap()[3])).collect();
        assert!(levels.iter().all(|v| (v - levels[0]).abs() <= 1e-6));
    }
}

#[test]
fn paths_manifest_counts_six_on_negative_axis() {
    let dir = tempfile::tempdir().unwrap();
    exec(&["paths", "--mu", "12", "--theta-over-pi", "1", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(manifest(dir.path())["contributory"].as_array().unwrap().len(), 6);
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_touchard")).args(args).output().unwrap()
}

#[test]
fn exit_codes() {
    assert!(binary(&["eval", "--n", "20", "--x", "5"]).status.success());
    let coalescing = binary(&["eval", "--n", "20", "--x", "54.3", "--theta-over-pi", "1"]);
    assert_eq!(coalescing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&coalescing.stderr).contains("error"));
    assert_eq!(binary(&["eval", "--n", "20", "--x", "5", "--theta-over-pi", "1.5"]).status.code(), Some(1));
    assert_eq!(binary(&["table", "--id", "3"]).status.code(), Some(1));
    assert_eq!(binary(&["paths", "--mu", "4"]).status.code(), Some(1));
    assert_eq!(binary(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_touchard"))
        .args(["eval", "--n", "20", "--x", "2"])
        .env("TOUCHARD_PRECISION", "4")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("1.761(-02)"));
}
