//! End-to-end checks of the `freaco` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fre_aco::fre::{Instance, EQ_TOL};
use fre_aco::objective::builtin_problem;
use fre_aco::oracle::planted_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn freaco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freaco"))
        .args(args)
        .env("FREACO_THREADS", "2")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn example_file() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/example1.json")
}

#[test]
fn solve_builtin_one() {
    let o = freaco(&["solve", "--builtin", "1", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = &json_lines(&o)[0];
    let f = v["best_f"].as_f64().unwrap();
    assert!(f >= -0.0096019 - 1e-6);
    assert_eq!(v["eval_count"], 347);
    let x: Vec<f64> = serde_json::from_value(v["best_x"].clone()).unwrap();
    let p = builtin_problem(1).unwrap();
    assert!(p.instance.residual(&x).unwrap() <= EQ_TOL);
}

#[test]
fn solve_writes_trace_and_result() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = dir.path().join("run.json");
    let o = freaco(&[
        "solve",
        "--builtin",
        "4",
        "--iters",
        "12",
        "--trace",
        trace.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert!(text.starts_with("iter,best_so_far\n"));
    let run: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(run["trace"].as_array().unwrap().len(), 12);
    assert_eq!(run["eval_count"], 50 + 3 * 11);
}

#[test]
fn missing_file_is_exit_one() {
    let o = freaco(&["solve", "--file", "missing.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("missing.json"));
}

#[test]
fn bad_objective_is_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        json!({"A": [[0.5]], "b": [0.5], "objective": "x2 +"}).to_string(),
    )
    .unwrap();
    let o = freaco(&["solve", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn infeasible_instance_is_exit_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (inst, _) = planted_instance(4, 3, 1.0, &mut rng);
    let rows: Vec<Vec<f64>> = inst.rows().map(<[f64]>::to_vec).collect();
    let mut b = inst.b().to_vec();
    // raise b[1] above every entry of its row, which no x can reach
    let top = rows[1].iter().copied().fold(0.0, f64::max);
    assert!(top < 1.0);
    b[1] = (top + 1.0) / 2.0;
    assert!(!Instance::new(rows.clone(), b.clone())
        .unwrap()
        .is_feasible(EQ_TOL));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("infeasible.json");
    std::fs::write(
        &path,
        json!({"A": rows, "b": b, "objective": "x1"}).to_string(),
    )
    .unwrap();
    let o = freaco(&["solve", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("violated rows: [2"), "{}", stderr(&o));
}

#[test]
fn bench_small_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = freaco(&[
        "bench",
        "--problems",
        "1,2",
        "--runs",
        "3",
        "--seed",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a).lines().count(), 3);
    let on_disk = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(on_disk, stdout(&a));
    let traces = std::fs::read_to_string(dir.path().join("traces.csv")).unwrap();
    assert_eq!(traces.lines().count(), 1 + 2 * 3 * 100);
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["problems"].as_array().unwrap().len(), 2);
    let b = freaco(&["bench", "--problems", "1,2", "--runs", "3", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_all_uses_347_evaluations() {
    let o = freaco(&["bench", "--problems", "all", "--runs", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| &r[5] == "347"));
}

#[test]
fn bench_rejects_unknown_problem() {
    let o = freaco(&["bench", "--problems", "1,12", "--runs", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_builtin_two() {
    let o = freaco(&["verify", "--builtin", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = &json_lines(&o)[0];
    assert!((v["best_value"].as_f64().unwrap() - 0.8197).abs() <= 1e-3);
    assert_eq!(v["samples_per_cell"], 200);
}

#[test]
fn verify_single_cell_toy() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toy.json");
    std::fs::write(
        &path,
        json!({"A": [[0.9, 0.2], [0.1, 0.8]], "b": [0.4, 0.3], "objective": "x1 + x2"}).to_string(),
    )
    .unwrap();
    let o = freaco(&[
        "verify",
        "--file",
        path.to_str().unwrap(),
        "--samples",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = &json_lines(&o)[0];
    assert_eq!(v["cells_examined"], 1);
    assert_eq!(v["problem"], "toy");
}

#[test]
fn verify_over_cap_is_exit_three() {
    for k in 1..=10 {
        let o = freaco(&["verify", "--builtin", &k.to_string(), "--cap", "1"]);
        assert_eq!(o.status.code(), Some(3), "problem {k}");
        assert!(o.stdout.is_empty());
        assert!(stderr(&o).contains("|E| = "));
    }
}

#[test]
fn enumerate_example_one() {
    let file = example_file();
    let o = freaco(&[
        "enumerate",
        "--file",
        file.to_str().unwrap(),
        "--max",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines = json_lines(&o);
    assert_eq!(lines[0]["xbar"], json!([1.0, 0.5, 0.3, 0.1, 0.7, 1.0]));
    assert_eq!(
        lines[0]["sets"],
        json!([[1, 5, 6], [1, 2], [3, 6], [2, 4, 5], [1, 6]])
    );
    assert_eq!(lines[0]["path_space_size"], "72");
    assert_eq!(lines.len(), 1 + 72);
    let p = fre_aco::objective::Problem::load(&file).unwrap();
    for l in &lines[1..] {
        let x: Vec<f64> = serde_json::from_value(l["candidate"].clone()).unwrap();
        assert!(p.instance.residual(&x).unwrap() <= EQ_TOL);
    }
    let e_prime = lines[1..]
        .iter()
        .find(|l| l["path"] == json!([5, 1, 6, 5, 1]))
        .unwrap();
    assert_eq!(e_prime["candidate"], json!([0.6, 0.0, 0.0, 0.0, 0.7, 0.3]));
}

#[test]
fn enumerate_max_zero() {
    let o = freaco(&["enumerate", "--builtin", "5", "--max", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["path_space_size"], "96");
}

#[test]
fn enumerate_bare_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bare.json");
    std::fs::write(&path, json!({"A": [[0.5, 0.8]], "b": [0.5]}).to_string()).unwrap();
    let o = freaco(&["enumerate", "--file", path.to_str().unwrap(), "--max", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json_lines(&o).len(), 1 + 2);
}

#[test]
fn problems_lists_ten() {
    let o = freaco(&["problems"]);
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0]["m"], 4);
    assert_eq!(lines[9]["n"], 12);
}

#[test]
fn usage_and_help() {
    assert_eq!(freaco(&[]).status.code(), Some(1));
    assert_eq!(freaco(&["solve", "--builtin", "0"]).status.code(), Some(1));
    assert_eq!(freaco(&["frobnicate"]).status.code(), Some(1));
    let help = freaco(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("enumerate"));
}
