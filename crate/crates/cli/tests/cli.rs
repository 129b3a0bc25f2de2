use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkcount"))
        .args(args)
        .env("LINKCOUNT_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

#[test]
fn enumerate_n4_csv() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["enumerate", "-n", "4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# format_version=1 n=4 total=42");
    assert_eq!(lines[1], "rank,match_array,count");
    assert_eq!(lines.len(), 2 + 14);
    assert_eq!(lines[2], "0,2 1 4 3 6 5 8 7,7");
    let total: u64 = lines[2..].iter().map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 42);
    assert!(stderr(&out).contains("42 states over 14 link patterns"));

    let one = run(dir.path(), &["enumerate", "-n", "1", "--format", "json"]);
    assert_eq!(json(&one)["total"], 1);
}

#[test]
fn workers_do_not_change_artifacts() {
    let dir = TempDir::new().unwrap();
    for n in ["5", "6"] {
        let mut artifacts = Vec::new();
        for workers in ["1", "2", "4"] {
            let path = dir.path().join(format!("h{n}-{workers}.csv"));
            let out = run(
                dir.path(),
                &["--no-cache", "enumerate", "-n", n, "--workers", workers, "--out", path.to_str().unwrap()],
            );
            assert!(out.status.success(), "{}", stderr(&out));
            artifacts.push(fs::read(&path).unwrap());
        }
        assert!(artifacts.windows(2).all(|w| w[0] == w[1]), "n = {n}");
    }
}

#[test]
fn cache_is_reused_and_checked() {
    let dir = TempDir::new().unwrap();
    let cold = run(dir.path(), &["enumerate", "-n", "5"]);
    assert!(stderr(&cold).contains("enumerated 429 states"));
    let cached = dir.path().join("n5").join("histogram.json");
    assert!(fs::read_to_string(&cached).unwrap().starts_with("# linkcount-cache format_version=1 sha256="));

    let warm = run(dir.path(), &["enumerate", "-n", "5"]);
    assert_eq!(warm.stdout, cold.stdout);
    assert!(!stderr(&warm).contains("enumerated"), "cache not used");

    let tampered = fs::read_to_string(&cached).unwrap().replacen("\"0\": 42", "\"0\": 41", 1);
    fs::write(&cached, tampered).unwrap();
    let healed = run(dir.path(), &["enumerate", "-n", "5"]);
    assert!(stderr(&healed).contains("checksum mismatch"), "{}", stderr(&healed));
    assert!(stderr(&healed).contains("enumerated 429 states"));
    assert_eq!(healed.stdout, cold.stdout);

    let bypass = run(dir.path(), &["--no-cache", "enumerate", "-n", "5"]);
    assert!(stderr(&bypass).contains("enumerated 429 states"));
    assert_eq!(bypass.stdout, cold.stdout);
}

#[test]
fn groundstate_sums() {
    let dir = TempDir::new().unwrap();
    let matrix = dir.path().join("h4.txt");
    let out = run(dir.path(), &["groundstate", "-n", "4", "--matrix", matrix.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["sum"], "42");
    assert_eq!(v["max"], "7");
    assert_eq!(v["components"].as_array().unwrap().len(), 14);
    let header = fs::read_to_string(&matrix).unwrap();
    assert!(header.starts_with(r#"{"format_version":1,"n":4,"dim":14,"column_sum":8}"#));

    let one = run(dir.path(), &["groundstate", "-n", "1"]);
    assert_eq!(json(&one)["components"], serde_json::json!(["1"]));

    let warm = run(dir.path(), &["groundstate", "-n", "4"]);
    assert_eq!(warm.stdout, out.stdout);
}

#[test]
fn groundstate_n8_matches_product_formula() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["groundstate", "-n", "8"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["sum"], "10850216");
    assert_eq!(v["max"], "218348");
}

#[test]
fn verify_exit_status() {
    let dir = TempDir::new().unwrap();
    for n in ["1", "4"] {
        let out = run(dir.path(), &["verify", "-n", n]);
        assert!(out.status.success(), "{}", stderr(&out));
        let report = json(&out);
        assert_eq!(report["pass"], true);
        assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    }
    let text = run(dir.path(), &["verify", "-n", "3", "--format", "text"]);
    assert!(stdout(&text).lines().all(|l| l.starts_with("PASS ")));

    // A cache entry with a valid checksum but wrong counts makes the checks fail.
    let bad = dir.path().join("bad");
    let payload = "{\n  \"format_version\": 1,\n  \"n\": 2,\n  \"total\": 2,\n  \"counts\": {\n    \"0\": 2,\n    \"1\": 0\n  }\n}";
    let sum = hex::encode(Sha256::digest(payload.as_bytes()));
    fs::create_dir_all(bad.join("n2")).unwrap();
    fs::write(bad.join("n2").join("histogram.json"), format!("# linkcount-cache format_version=1 sha256={sum}\n{payload}"))
        .unwrap();
    let out = run(&bad, &["verify", "-n", "2"]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert_eq!(json(&out)["pass"], false);
    assert!(stderr(&out).contains("perron_equals_histogram"));
}

#[test]
fn long_runs_need_the_flag() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["verify", "-n", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--long"));
    let out = run(dir.path(), &["enumerate", "-n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--max-fpl-n"), "{}", stderr(&out));
    let out = run(dir.path(), &["groundstate", "-n", "10"]);
    assert!(stderr(&out).contains("--max-dim"));
    let out = run(dir.path(), &["enumerate", "-n", "0"]);
    assert!(!out.status.success());
}

#[test]
fn sample_reports() {
    let dir = TempDir::new().unwrap();
    let args = ["sample", "-n", "4", "--seed", "7", "--samples", "200000"];
    let a = run(dir.path(), &args);
    assert!(a.status.success(), "{}", stderr(&a));
    let report = json(&a);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["burn_in"], 1000);
    assert_eq!(report["samples"], 200000);
    assert!(report["tv_distance"].as_f64().unwrap() < report["tolerance"].as_f64().unwrap());
    assert_eq!(run(dir.path(), &args).stdout, a.stdout);

    let one = run(dir.path(), &["sample", "-n", "1", "--samples", "10"]);
    let report = json(&one);
    assert_eq!(report["empirical"]["0"], 10);
    assert_eq!(report["tv_distance"], 0.0);
}

#[test]
fn render_outputs() {
    let dir = TempDir::new().unwrap();
    let one = run(dir.path(), &["render", "--asm", "1"]);
    assert_eq!(stdout(&one), "     1\n     |\n     +\n     |\n     2\nlink pattern: 2 1\n");
    let svg = run(dir.path(), &["render", "--pattern", "2 1 4 3", "--format", "svg"]);
    assert_eq!(stdout(&svg).matches("<line").count(), 2);
    let asm = run(dir.path(), &["render", "--asm", "0 1 0; 1 -1 1; 0 1 0"]);
    assert!(asm.status.success(), "{}", stderr(&asm));
    assert!(stdout(&asm).ends_with("link pattern: 2 1 6 5 4 3\n"));
    let indexed = run(dir.path(), &["render", "-n", "5", "--index", "428"]);
    assert!(indexed.status.success());
    let missing = run(dir.path(), &["render", "-n", "5", "--index", "429"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad = run(dir.path(), &["render", "--asm", "1 1; 0 0"]);
    assert_eq!(bad.status.code(), Some(2));
}
