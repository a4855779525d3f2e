use std::path::Path;
use std::process::{Command, Output};

fn nmls(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmls"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON object")
}

#[test]
fn run_prints_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmls(&["run", "--function", "rastrigin", "--method", "nm4", "--seed", "7"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rec = json(&out);
    assert_eq!(rec["method"], "NM4");
    assert_eq!(rec["function"], "rastrigin");
    assert!(rec["best_f"].as_f64().unwrap() <= rec["f0"].as_f64().unwrap());
    assert!(rec["f_evals"].as_u64().unwrap() <= 100 * 11);
    assert!(rec["status"].is_string());
}

#[test]
fn run_from_the_minimizer_stays_there() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmls(&["run", "--function", "griewank", "--method", "m", "--x0", "0,0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rec = json(&out);
    assert_eq!(rec["best_f"].as_f64(), Some(0.0));
    assert_eq!(rec["breakpoints"][0]["evals"].as_u64(), Some(0));
    assert_eq!(rec["breakpoints"][0]["best_f"].as_f64(), Some(0.0));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["run", "--function", "nosuch", "--method", "m", "--seed", "1"],
        &["run", "--function", "griewank", "--method", "nm9", "--seed", "1"],
        &["run", "--function", "griewank", "--method", "m"],
        &["run", "--function", "griewank", "--method", "m", "--seed", "1", "--x0", "0,0"],
        &["run", "--function", "griewank", "--method", "m", "--x0", "0,0,0"],
        &["run", "--function", "griewank", "--method", "m", "--seed", "1", "--beta", "1.5"],
    ];
    for args in cases {
        let out = nmls(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_lists_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let run = stdout(&nmls(&["run", "--help"], dir.path()));
    for flag in ["--theta", "--sigma", "--budget-sg", "--alpha0", "--beta", "--rho", "--window-m"] {
        assert!(run.contains(flag), "{flag}");
    }
    assert!(run.contains("[default: auto]"));
    assert!(run.contains("[default: 0.5]"));
    let bench = stdout(&nmls(&["bench", "--help"], dir.path()));
    assert!(bench.contains("[default: 30]"));
    assert!(bench.contains("[default: 42]"));
    assert!(bench.contains("[default: m,nm1,nm2,nm3,nm4]"));
    let profile = stdout(&nmls(&["profile", "--help"], dir.path()));
    assert!(profile.contains("[default: 0.0000001]") || profile.contains("[default: 1e-7]"));
}

#[test]
fn default_bench_then_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmls(&["bench", "--jobs", "4", "--out", "r.tsv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("r.tsv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("#nmls-results v1 seed=42 plan="));
    assert_eq!(lines.count(), 3000);

    let out = nmls(&["profile", "--in", "r.tsv", "--out-prefix", "profiles"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("profiles.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "alpha,M,NM1,NM2,NM3,NM4");
    assert_eq!(rows.len(), 102);
    assert!(rows.iter().all(|r| r.split(',').count() == 6));
    let svg = std::fs::read_to_string(dir.path().join("profiles.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 5);
}

#[test]
fn bench_output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    for (jobs, name) in [("1", "a.tsv"), ("3", "b.tsv"), ("3", "c.tsv")] {
        let out = nmls(&["bench", "--starts", "2", "--jobs", jobs, "--out", name], dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("a.tsv")).unwrap();
    assert!(a == std::fs::read(dir.path().join("b.tsv")).unwrap());
    assert!(a == std::fs::read(dir.path().join("c.tsv")).unwrap());
}

#[test]
fn bench_reads_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("plan.toml"),
        "[plan]\nmethods = [\"NM3\", \"NM4\"]\nstarts_per_function = 1\nbudget_simplex_gradients = 10\n\n[params]\ntheta = 0.5\n",
    )
    .unwrap();
    let out = nmls(&["bench", "--config", "plan.toml", "--out", "r.tsv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("r.tsv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 20 * 2);
    let bad = nmls(&["bench", "--config", "plan.toml", "--seed", "3"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn profile_rejects_unusable_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.tsv"), "").unwrap();
    std::fs::write(dir.path().join("header.tsv"), "#nmls-results v1 seed=1 plan=0000000000000000\n").unwrap();
    std::fs::write(dir.path().join("v9.tsv"), "#nmls-results v9 seed=1 plan=0000000000000000\n").unwrap();
    for file in ["empty.tsv", "header.tsv", "v9.tsv", "missing.tsv"] {
        let out = nmls(&["profile", "--in", file], dir.path());
        assert_eq!(out.status.code(), Some(1), "{file}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["gradients", "lemma1", "theorem1", "all"] {
        let out = nmls(&["verify", "--suite", suite], dir.path());
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
        let last = stdout(&out).lines().last().unwrap().to_string();
        let summary: serde_json::Value = serde_json::from_str(&last).unwrap();
        assert_eq!(summary["passed"], true);
    }
    let grads = stdout(&nmls(&["verify", "--suite", "gradients"], dir.path()));
    assert_eq!(grads.lines().filter(|l| l.starts_with("ok")).count(), 20);
    let all = stdout(&nmls(&["verify", "--suite", "all"], dir.path()));
    assert_eq!(all.lines().filter(|l| l.starts_with("ok")).count(), 25);
}

#[test]
fn list_functions_shows_the_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&nmls(&["list-functions"], dir.path()));
    assert_eq!(out.lines().count(), 20);
    assert!(out.contains("storn_tchebychev"));
}
