//! End-to-end tests of the binary: desk-value computations, exit codes,
//! file outputs, and reproducibility of seeded runs.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sumprodlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_line(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

#[test]
fn compute_desk_values() {
    let out = run(&[
        "compute",
        "--family",
        "interval:3",
        "--quantity",
        "pinned-product",
        "--pin",
        "1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_line(&out), "7");

    let out = run(&["compute", "--family", "geometric:2:1", "--quantity", "add-energy"]);
    assert!(out.status.success());
    assert_eq!(stdout_line(&out), "1");

    let out = run(&["compute", "--family", "interval:3", "--quantity", "mult-energy"]);
    assert_eq!(stdout_line(&out), "15");

    let out = run(&["compute", "--family", "interval:2", "--quantity", "five-var"]);
    assert_eq!(stdout_line(&out), "10");

    let out = run(&["compute", "--family", "interval:3", "--quantity", "gk-quadruples"]);
    // {1,2,3} is a translate of {0,1,2}
    assert_eq!(stdout_line(&out), "1329");
}

#[test]
fn compute_from_set_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.txt");
    std::fs::write(&path, "# demo set\n3\n1\n2\n2\n").unwrap();
    let out = run(&["compute", "--set", path.to_str().unwrap(), "--quantity", "mult-energy"]);
    assert!(out.status.success());
    assert_eq!(stdout_line(&out), "15");

    // rationals in files
    let path2 = dir.path().join("b.txt");
    std::fs::write(&path2, "1/2\n2/4\n3\n").unwrap();
    let out = run(&["compute", "--set", path2.to_str().unwrap(), "--quantity", "set-size"]);
    assert_eq!(stdout_line(&out), "2");
}

#[test]
fn compute_crossover_needs_no_set() {
    let out = run(&[
        "compute",
        "--quantity",
        "crossover",
        "--pinned",
        "3/2,1/2",
        "--alt",
        "20/13,40/13",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_line(&out), "140/93"); // 3/2 + 1/186
}

#[test]
fn compute_json_output() {
    let out = run(&[
        "compute",
        "--family",
        "interval:3",
        "--quantity",
        "pinned-product",
        "--pin",
        "1",
        "--json",
        "--elements",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cardinality"], "7");
    assert_eq!(v["elements"].as_array().unwrap().len(), 7);
}

#[test]
fn exit_codes() {
    // parse error in a set file -> 2
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "1\nnot-a-number\n").unwrap();
    let out = run(&["compute", "--set", path.to_str().unwrap(), "--quantity", "set-size"]);
    assert_eq!(out.status.code(), Some(2));

    // precondition violation (0 in a multiplicative set) -> 3, named
    let zero = dir.path().join("zero.txt");
    std::fs::write(&zero, "0\n1\n2\n").unwrap();
    let out = run(&["compute", "--set", zero.to_str().unwrap(), "--quantity", "mult-energy"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("precondition"), "stderr names the precondition: {err}");

    // unknown quantity -> 2
    let out = run(&["compute", "--family", "interval:3", "--quantity", "nope"]);
    assert_eq!(out.status.code(), Some(2));

    // clap usage error -> 2
    let out = run(&["compute"]);
    assert_eq!(out.status.code(), Some(2));

    // non-positive set for the five-variable expander -> 3
    let neg = dir.path().join("neg.txt");
    std::fs::write(&neg, "-1\n2\n3\n").unwrap();
    let out = run(&["compute", "--set", neg.to_str().unwrap(), "--quantity", "five-var"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn certificates_are_json_documents() {
    let out = run(&[
        "compute",
        "--family",
        "geometric:2:8",
        "--quantity",
        "double-pigeonhole",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["certificate"]["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|a| a["satisfied"] == true));
    // exact rational sides as numerator/denominator strings
    assert!(v["certificate"]["assertions"][0]["lhs"]["num"].is_string());
    assert!(v["witness"]["t"].is_string());
}

#[test]
fn histogram_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h.csv");
    let out = run(&[
        "compute",
        "--family",
        "interval:3",
        "--quantity",
        "diff-histogram",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "value_num,value_den,count");
    assert_eq!(lines[1], "-2,1,1");
    assert_eq!(lines[3], "0,1,3");
    assert_eq!(lines.len(), 6);
}

#[test]
fn verify_writes_reports_and_respects_globs() {
    let dir = tempfile::tempdir().unwrap();
    let jsonl = dir.path().join("r.jsonl");
    let csv = dir.path().join("s.csv");
    let out = run(&[
        "verify",
        "--specs",
        "exact.cs-mult,T1",
        "--family",
        "interval",
        "--sizes",
        "4,8",
        "--seeds",
        "1..2",
        "--jsonl",
        jsonl.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&jsonl).unwrap();
    // 2 specs x 2 sizes x 2 seeds
    assert_eq!(text.lines().count(), 8);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["spec"], "T1");
    assert!(first["elapsed_ms"].is_null());
    let summary = std::fs::read_to_string(&csv).unwrap();
    assert!(summary.starts_with("spec,family,count"));

    // empty selection: exit 0, empty report
    let out = run(&[
        "verify",
        "--specs",
        "none-matching",
        "--family",
        "interval",
        "--sizes",
        "4",
        "--jsonl",
        jsonl.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&jsonl).unwrap().len(), 0);
}

#[test]
fn report_summarizes_records() {
    let dir = tempfile::tempdir().unwrap();
    let jsonl = dir.path().join("r.jsonl");
    let csv1 = dir.path().join("s1.csv");
    let csv2 = dir.path().join("s2.csv");
    let out = run(&[
        "verify",
        "--specs",
        "exact.*",
        "--family",
        "geometric:2",
        "--sizes",
        "4,6",
        "--seeds",
        "1",
        "--jsonl",
        jsonl.to_str().unwrap(),
        "--csv",
        csv1.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "report",
        "--input",
        jsonl.to_str().unwrap(),
        "--csv",
        csv2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(&csv1).unwrap(),
        std::fs::read(&csv2).unwrap(),
        "report reproduces the verify summary"
    );
}

#[test]
fn scan_fits_interval_sumset() {
    let out = run(&[
        "scan",
        "--family",
        "interval",
        "--quantity",
        "sumset-size",
        "--sizes",
        "8,16,32,64",
    ]);
    assert!(out.status.success());
    let line = stdout_line(&out);
    assert!(line.starts_with("fit:"), "{line}");
    let slope: f64 = line
        .split("slope=")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 1.0).abs() < 0.05, "slope {slope}");

    // too few sizes -> config error
    let out = run(&["scan", "--family", "interval", "--quantity", "sumset-size", "--sizes", "8,16"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_trace_is_reproducible_and_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let trace1 = dir.path().join("t1.jsonl");
    let trace2 = dir.path().join("t2.jsonl");
    let out_set = dir.path().join("final.txt");
    for (trace, _) in [(&trace1, 0), (&trace2, 1)] {
        let out = run(&[
            "search",
            "--objective",
            "min-aaplus",
            "--start",
            "geometric:2:8",
            "--steps",
            "60",
            "--seed",
            "1",
            "--trace",
            trace.to_str().unwrap(),
            "--out-set",
            out_set.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(
        std::fs::read(&trace1).unwrap(),
        std::fs::read(&trace2).unwrap(),
        "identical seeds give identical traces"
    );
    let text = std::fs::read_to_string(&trace1).unwrap();
    let header: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(header["rng"], "chacha20");
    let mut last = f64::INFINITY;
    for line in text.lines().skip(1) {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        let obj = row["objective"].as_f64().unwrap();
        assert!(obj <= last + 1e-12, "objective must not rise");
        last = obj;
    }
    // final set loads back
    assert!(load_len(&out_set) == 8);
}

fn load_len(path: &Path) -> usize {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).count()
}
