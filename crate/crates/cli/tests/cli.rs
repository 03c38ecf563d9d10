use std::process::{Command, Output};

use jackstein::chain::{m_chain, ChainKind, TransitionMatrix};
use jackstein::scalar::{int, ratio, to_f64};
use jackstein::stein::ExactLaw;
use jackstein::theta::{self, jack_theta_table};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jackstein"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    csv_parse(text).into_iter().skip(1).collect()
}

fn csv_parse(text: &str) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn measure_plancherel_three() {
    let rows = csv_rows(&stdout(&[
        "measure", "-n", "3", "--alpha", "1", "--format", "csv",
    ]));
    let exact: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(exact, ["1/6", "2/3", "1/6", "1"]);
    assert_eq!(rows[3][0], "total");
}

#[test]
fn measure_worked_example_and_empty() {
    let rows = csv_rows(&stdout(&[
        "measure", "-n", "5", "--alpha", "2", "--format", "csv",
    ]));
    let row = rows.iter().find(|r| r[0] == "[3,2]").unwrap();
    assert_eq!(row[1], "2/21");
    assert_eq!(rows.last().unwrap()[1], "1");
    let rows = csv_rows(&stdout(&["measure", "-n", "0", "--format", "csv"]));
    assert_eq!(rows[0][..2], ["[]".to_string(), "1".to_string()]);
}

#[test]
fn measure_json_reports_total() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "measure", "-n", "6", "--alpha", "3/2", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(v["total"], "1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);
}

#[test]
fn chain_rows_at_alpha_two() {
    let m = csv_parse(&stdout(&[
        "chain", "-n", "3", "--alpha", "2", "--kind", "M", "--format", "csv",
    ]));
    assert_eq!(m[1], ["[3]", "1/5", "4/5", "0"]);
    let k = csv_parse(&stdout(&[
        "chain", "-n", "3", "--alpha", "2", "--kind", "K", "--format", "csv",
    ]));
    // columns (3), (2,1), (1^3)
    assert_eq!(k[1], ["[3]", "1/2", "1/2", "0"]);
}

#[test]
fn chain_two_step_return() {
    let out = stdout(&[
        "chain",
        "-n",
        "4",
        "--alpha",
        "1",
        "--kind",
        "K",
        "--steps",
        "2",
        "--start",
        "[1,1,1,1]",
        "--format",
        "csv",
    ]);
    let rows = csv_rows(&out);
    let back = rows.iter().find(|r| r[0] == "[1,1,1,1]").unwrap();
    assert_eq!(back[1], "1/6");
}

#[test]
fn chain_csv_round_trips() {
    let a = ratio(3, 2);
    let text = stdout(&[
        "chain", "-n", "6", "--alpha", "3/2", "--kind", "M", "--format", "csv",
    ]);
    let parsed = TransitionMatrix::from_csv(&text, &a, ChainKind::M).unwrap();
    assert_eq!(parsed, m_chain(6, &a).unwrap());
}

#[test]
fn theta_csv_round_trips() {
    let a = int(3);
    let text = stdout(&["theta", "-n", "5", "--alpha", "3", "--format", "csv"]);
    let parsed = theta::from_csv(&text, &a).unwrap();
    assert_eq!(parsed.values(), jack_theta_table(5, &a).unwrap().values());
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["chain", "-n", "3", "--alpha", "1/2", "--kind", "M"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duality"));
    assert_eq!(run(&["measure", "--alpha", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "--alpha", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["chain", "--kind", "X"]).status.code(), Some(2));
    assert_eq!(run(&["clt", "--alpha", "1/3"]).status.code(), Some(2));
    let out = run(&["verify", "-n", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));
}

#[test]
fn sample_is_deterministic() {
    let args = [
        "sample",
        "-n",
        "7",
        "--alpha",
        "3/2",
        "--samples",
        "3000",
        "--seed",
        "42",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_ne!(
        first.stdout,
        run(&[
            "sample",
            "-n",
            "7",
            "--alpha",
            "3/2",
            "--samples",
            "3000",
            "--seed",
            "43"
        ])
        .stdout
    );
}

#[test]
fn sample_variance_near_one() {
    let samples = 100_000.0;
    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "sample",
        "-n",
        "6",
        "--alpha",
        "1",
        "--samples",
        "100000",
        "--seed",
        "2024",
        "--format",
        "json",
    ]))
    .unwrap();
    let var: f64 = v["variance"].as_str().unwrap().parse().unwrap();
    // standard error of the sample variance from the exact fourth moment
    let law = ExactLaw::new(6, &int(1)).unwrap();
    let s = to_f64(&law.scale());
    let mu4 = to_f64(&law.raw_moment(4)) / (s * s);
    let sigma = ((mu4 - 1.0) / samples).sqrt();
    assert!(
        (var - 1.0).abs() <= 3.0 * sigma,
        "variance {var}, sigma {sigma}"
    );
}

#[test]
fn sample_frequencies_match_exact_law() {
    let samples = 100_000.0;
    let rows = csv_rows(&stdout(&[
        "sample",
        "-n",
        "3",
        "--alpha",
        "2",
        "--samples",
        "100000",
        "--seed",
        "9",
        "--format",
        "csv",
    ]));
    assert_eq!(rows.len(), 3);
    for r in rows {
        let freq: f64 = r[3].parse().unwrap();
        let q = to_f64(&jackstein::scalar::parse_scalar(&r[4]).unwrap());
        let sigma = (q * (1.0 - q) / samples).sqrt();
        assert!((freq - q).abs() <= 4.0 * sigma, "{r:?}");
    }
}

#[test]
fn clt_table() {
    let rows = csv_rows(&stdout(&[
        "clt", "--alpha", "1", "--n-list", "2,4,8,16", "--format", "csv",
    ]));
    assert_eq!(rows.len(), 4);
    for r in &rows {
        let n: f64 = r[0].parse().unwrap();
        let d: f64 = r[1].parse().unwrap();
        let b: f64 = r[2].parse().unwrap();
        assert!(d <= 40.1 * n.powf(-0.25));
        assert!(b >= d);
    }
    let d2: f64 = rows[0][1].parse().unwrap();
    assert!((d2 - 0.3413).abs() < 5e-5);
}

#[test]
fn verify_small_run_passes_and_writes_file() {
    let path = std::env::temp_dir().join(format!("jackstein-verify-{}.csv", std::process::id()));
    let out = run(&[
        "verify",
        "-n",
        "4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let rows = csv_rows(&text);
    assert!(rows.len() > 50);
    assert!(rows.iter().all(|r| r[1] == "pass"));
    assert!(rows
        .iter()
        .any(|r| r[0].starts_with("n=3 permutation chain fixture")));
}
