use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isingbench")).current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

// Data rows of a CSV report, header included, comments dropped.
fn table(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = rows[0].iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows[1..].iter().map(|r| r[i].clone()).collect()
}

fn assert_svg(path: &Path) {
    let text = fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(doc.root_element().tag_name().name(), "svg");
}

#[test]
fn generate_small_chimera() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["generate", "--topology", "chimera:1,1,4", "--seed", "7"]);
    let v = json(&dir.path().join("instance.json"));
    assert_eq!(v["format"], "ising-v1");
    assert_eq!(v["h"].as_object().unwrap().len(), 8);
    assert_eq!(v["J"].as_array().unwrap().len(), 16);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["meta"]["seed"], 7);
    assert!(v["meta"]["command"].as_str().unwrap().contains("chimera:1,1,4"));
}

#[test]
fn generate_reports_target_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["generate", "--topology", "pegasus:16", "--dist", "hardness:0.5"]);
    let f: f64 = out.trim().rsplit("F = ").next().unwrap().parse().unwrap();
    assert!((f - 0.5).abs() < 0.025, "{out}");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (threads, out) in [("1", "a"), ("3", "b")] {
        ok(
            d,
            &[
                "--threads",
                threads,
                "--out",
                out,
                "--seed",
                "11",
                "generate",
                "--topology",
                "zephyr:2,2",
                "--count",
                "2",
            ],
        );
        ok(
            d,
            &[
                "--threads",
                threads,
                "--out",
                out,
                "--seed",
                "5",
                "solve",
                "--instance",
                "a/instance_001.json",
                "--solver",
                "sqa:reads=6,sweeps=30,slices=4",
                "--name",
                "s",
            ],
        );
    }
    for f in ["instance_000.json", "instance_001.json", "s.json"] {
        assert_eq!(fs::read(d.join("a").join(f)).unwrap(), fs::read(d.join("b").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn benchmark_against_exact_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["--seed", "2", "generate", "--topology", "complete:16", "--dist", "hardness:1", "--name", "k16"]);
    ok(
        d,
        &[
            "--out",
            "r",
            "benchmark",
            "--instance",
            "k16.json",
            "--candidate",
            "sa:reads=40,sweeps=100",
            "--baseline",
            "exact",
        ],
    );
    let rows = table(&d.join("r/rl.csv"));
    assert_eq!(rows.len(), 2);
    let rl_min: f64 = column(&rows, "rl_min")[0].parse().unwrap();
    assert!(rl_min >= 0.0);
    assert_eq!(column(&rows, "samples"), ["40"]);
    assert_svg(&d.join("r/rl_boxplot.svg"));
    assert_svg(&d.join("r/consistency.svg"));
    let s = json(&d.join("r/samples/k16__exact.json"));
    assert_eq!(s["solver"], "exact");
}

#[test]
fn hardness_sweep_gives_one_row_per_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut args: Vec<String> = vec!["--out".into(), "r".into(), "benchmark".into()];
    for f in ["0.5", "1", "2", "4"] {
        ok(
            d,
            &[
                "generate",
                "--topology",
                "chimera:1,1,4",
                "--dist",
                &format!("hardness:{f}"),
                "--name",
                &format!("f{f}"),
            ],
        );
        args.extend(["--instance".into(), format!("f{f}.json")]);
    }
    args.extend(
        ["--candidate", "sqa:reads=20,sweeps=50,slices=4", "--baseline", "sa:reads=20,sweeps=50"].map(String::from),
    );
    ok(d, &args.iter().map(String::as_str).collect::<Vec<_>>());
    let rows = table(&d.join("r/consistency.csv"));
    let solvers = column(&rows, "solver");
    assert_eq!(solvers.len(), 8);
    for solver in ["sqa:reads=20,sweeps=50,slices=4", "sa:reads=20,sweeps=50"] {
        let fs: Vec<f64> = column(&rows, "F")
            .iter()
            .zip(&solvers)
            .filter(|(_, s)| *s == solver)
            .map(|(f, _)| f.parse().unwrap())
            .collect();
        assert_eq!(fs.len(), 4);
        assert!(fs.windows(2).all(|w| w[0] < w[1]), "{fs:?}");
    }
}

#[test]
fn repetitions_fix_the_sample_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--topology", "chimera:1,1,4", "--dist", "hardness:2"]);
    ok(
        d,
        &[
            "benchmark",
            "--instance",
            "instance.json",
            "--candidate",
            "sqa:sweeps=20,slices=4",
            "--baseline",
            "sa:sweeps=20",
            "--repetitions",
            "2000",
        ],
    );
    assert_eq!(column(&table(&d.join("rl.csv")), "samples"), ["2000"]);
    for f in ["instance__sqa_sweeps_20_slices_4.json", "instance__sa_sweeps_20.json"] {
        let v = json(&d.join("samples").join(f));
        let total: u64 = v["records"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).sum();
        assert_eq!(total, 2000);
    }
}

#[test]
fn benchmark_fails_when_every_run_fails() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--topology", "complete:3"]);
    let out = run(
        d,
        &[
            "benchmark",
            "--instance",
            "instance.json",
            "--candidate",
            "external:false",
            "--baseline",
            "external:/nonexistent/x",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--topology", "complete:8", "--dist", "hardness:1"]);
    ok(d, &["solve", "--instance", "instance.json", "--solver", "exact", "--name", "s"]);
    ok(d, &["verify", "--instance", "instance.json", "--samples", "s.json"]);
    let text = fs::read_to_string(d.join("s.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    let e = v["records"][0]["energy"].as_f64().unwrap();
    v["records"][0]["energy"] = (e + 1e-3).into();
    fs::write(d.join("bad.json"), serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(run(d, &["verify", "--instance", "instance.json", "--samples", "bad.json"]).status.code(), Some(1));
}

#[test]
fn knapsack_directory() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["--out", "gen", "kp", "--synthetic", "10", "--save-instances"]);
    ok(d, &["--out", "r", "kp", "--input", "gen/instances", "--lambda", "7"]);
    let rows = table(&d.join("r/kp_hardness.csv"));
    assert_eq!(rows[0], ["file", "n", "C", "lambda", "sigma_h", "sigma_J", "F_qubo", "F_ising", "dominance"]);
    assert_eq!(rows.len(), 11);
    assert!(column(&rows, "lambda").iter().all(|l| l == "7.0"));
    assert!(fs::read_to_string(d.join("r/kp_hardness.csv")).unwrap().contains("# lambda: 7\n"));
    let bins = table(&d.join("r/kp_histogram.csv"));
    assert_eq!(bins[0], ["bin_lo", "bin_hi", "count"]);
    let total: u64 = column(&bins, "count").iter().map(|c| c.parse::<u64>().unwrap()).sum();
    assert_eq!(total, 10);
    assert_svg(&d.join("r/kp_histogram.svg"));
}

#[test]
fn knapsack_skips_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("good.kp"), "2\n1 1 1\n2 2 3\n2\n").unwrap();
    fs::write(d.join("bad.kp"), "2\n1 1\n").unwrap();
    let out = run(d, &["kp", "--input", "good.kp", "bad.kp"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.kp"));
    assert_eq!(run(d, &["kp", "--input", "bad.kp"]).status.code(), Some(1));
}

#[test]
fn orderstats_uniform_pair_grid() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["orderstats", "--weights", "uniform:0,1", "--n", "2", "--grid", "21", "--mc-samples", "100000", "--svg"]);
    let rows = table(&d.join("orderstats_range.csv"));
    let xs: Vec<f64> = column(&rows, "x").iter().map(|x| x.parse().unwrap()).collect();
    let cdf: Vec<f64> = column(&rows, "cdf").iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(xs.len(), 21);
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
    for (x, c) in xs.iter().zip(&cdf) {
        assert!((c - (2.0 * x - x * x)).abs() < 1e-7, "x={x}");
    }
    let diffs: Vec<f64> = column(&rows, "abs_diff").iter().map(|x| x.parse().unwrap()).collect();
    assert!(diffs.iter().all(|&e| e < 0.01));
    assert_svg(&d.join("orderstats_range.svg"));
}

#[test]
fn orderstats_json_and_tail() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "--format",
            "json",
            "orderstats",
            "--weights",
            "uniform:1,10",
            "--scale",
            "uniform:11,40",
            "--n",
            "4",
            "--mode",
            "scaled_range",
            "--grid",
            "5",
            "--mc-samples",
            "0",
            "--tail",
        ],
    );
    let v = json(&d.join("orderstats_scaled_range.json"));
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert!(v["rows"][0]["mc_cdf"].is_null());
    let t = json(&d.join("tail_report.json"));
    assert!(t["rows"][0]["scaled_range_tail_width"].as_f64().unwrap() > 1.0);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        &["orderstats", "--weights", "uniform:0,1", "--n", "3", "--mode", "scaled_range"][..],
        &["orderstats", "--weights", "uniform:-1,1", "--n", "3", "--mode", "squared_range"][..],
        &["generate", "--topology", "hexagon:3"][..],
        &["generate", "--topology", "chimera:2", "--dist", "hardness:9"][..],
        &["solve", "--instance", "x.json", "--solver", "tabu"][..],
        &["kp"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(run(d, args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run(d, &["solve", "--instance", "missing.json", "--solver", "exact"]).status.code(), Some(1));
}
