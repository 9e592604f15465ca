use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gprbench(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gprbench"))
        .args(args)
        .current_dir(dir)
        .env("GPR_OUT_DIR", dir.join("out"))
        .output()
        .expect("binary runs")
}

fn report(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("out").join(name)).unwrap()).unwrap()
}

#[test]
fn verify_small_sizes_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = gprbench(dir.path(), &["verify", "--sizes", "2,4", "--Bmax", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(dir.path(), "verify.json");
    assert_eq!(r["passed"], true);
    assert_eq!(r["result"]["mismatchProtocol"], "equal");
    assert!(r["result"]["suites"].as_array().unwrap().iter().all(|s| s["passedCases"] == s["cases"]));
}

#[test]
fn verify_reports_depth_peaks() {
    let dir = tempfile::tempdir().unwrap();
    let out = gprbench(dir.path(), &["verify", "--sizes", "16", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(dir.path(), "verify.json");
    let peaks = r["result"]["boundedWidth"][0]["perDepthPeak"].as_object().unwrap();
    assert_eq!(peaks.len(), 4);
}

#[test]
fn square_children_mismatch_is_reported_and_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = gprbench(dir.path(), &["verify", "--sizes", "8", "--trials", "5", "--child-shape", "square"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(dir.path(), "verify.json");
    assert_eq!(r["result"]["mismatchProtocol"], "mismatchReported");
    let m = &r["result"]["conformance"]["entries"][0]["literal"]["firstMismatch"];
    for key in ["trialSeed", "quadrantPath", "depth", "row", "col", "expected", "got"] {
        assert!(!m[key].is_null(), "{key} missing");
    }
    assert!(String::from_utf8_lossy(&out.stdout).contains("first mismatch"));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = ["a.json", "b.json"]
        .iter()
        .map(|name| {
            let out = gprbench(dir.path(), &["verify", "--sizes", "2,4,8", "--seed", "7", "--out", name]);
            assert_eq!(out.status.code(), Some(0));
            fs::read(dir.path().join(name)).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let other = gprbench(dir.path(), &["verify", "--sizes", "2,4,8", "--seed", "8", "--out", "c.json"]);
    assert_eq!(other.status.code(), Some(0));
    assert_ne!(fs::read(dir.path().join("c.json")).unwrap(), runs[0]);
}

#[test]
fn bench_csv_and_models() {
    let dir = tempfile::tempdir().unwrap();
    let out = gprbench(dir.path(), &["bench", "--sizes", "4,8", "--model", "wordram", "--w", "64", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("out/bench.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "wordOps").unwrap();
    for line in lines {
        assert!(line.split(',').nth(col).unwrap().parse::<u64>().unwrap() > 0);
    }
    let out = gprbench(dir.path(), &["bench", "--sizes", "8", "--model", "uniform"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(dir.path(), "bench.json");
    assert!(r["result"]["rows"][0]["wordOps"].is_null());
    assert!(r["result"]["fit"]["wordOpsSlope"].is_null());
}

#[test]
fn classify_cases() {
    let dir = tempfile::tempdir().unwrap();
    for (alphas, case) in [("0.5,0.5", 1), ("0.5x4", 2), ("0.5x8", 3)] {
        let out = gprbench(dir.path(), &["classify", "--alphas", alphas]);
        assert_eq!(out.status.code(), Some(0));
        let r = report(dir.path(), "classify.json");
        assert_eq!(r["result"]["classification"]["case"], case);
        let exponent = r["result"]["classification"]["exponent"].as_f64().unwrap();
        assert_eq!(exponent, if case == 3 { 3.0 } else { 2.0 });
    }
}

#[test]
fn input_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("g.json"), r#"{"start":"S","unary":[["A","a"],["B","b"]],"binary":[["S","A","B"]]}"#).unwrap();
    let out = gprbench(p, &["cfg", "--grammar", "g.json", "--word", "ab", "--word", "ba"]);
    assert_eq!(out.status.code(), Some(0));
    let words = report(p, "cfg.json")["result"]["words"].clone();
    assert_eq!((words[0]["accepted"].clone(), words[1]["accepted"].clone()), (true.into(), false.into()));

    fs::write(p.join("path.txt"), "0 1\n1 2\n").unwrap();
    let out = gprbench(p, &["apsp", "--graph", "path.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(p, "apsp.json");
    assert_eq!(r["result"]["dist"][0][2], 2);
    assert!(r["result"]["dist"][2][0].is_null());

    fs::write(p.join("k4.txt"), "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let out = gprbench(p, &["triangle", "--graph", "k4.txt"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(p, "triangle.json")["result"]["count"], 4);
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = gprbench(dir.path(), &["verify", "--sizes", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gprbench(dir.path(), &["apsp", "--graph", "missing.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn explicit_out_beats_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = gprbench(dir.path(), &["classify", "--alphas", "1/3", "--out", "here/x.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("here/x.json").exists());
    assert!(!dir.path().join("out").exists());
}
