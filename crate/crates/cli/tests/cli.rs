use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_linesum"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    // The binary may exit before reading stdin (argument errors).
    let _ = child
        .stdin
        .take()
        .expect("piped")
        .write_all(stdin.as_bytes());
    child.wait_with_output().expect("binary exits")
}

fn run_json(args: &[&str], stdin: &str) -> Value {
    let out = run(args, stdin);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn worked_example() {
    let v = run_json(&["worked-example"], "");
    assert_eq!(v["s"], 9);
    assert_eq!(v["t"], 13);
    assert_eq!(v["E"], "13/5");
    assert_eq!(v["slack"], "4/3");
    assert_eq!(v["norm_sq_f0"], "166/15");
    assert_eq!(v["radicand"], "59/15");
    assert_eq!(v["f0_times_30"][4], json!([14, 14, 8, 2, -4, -4]));
    assert_eq!(v["F"][0], json!([1, 1, 1, 1, 1, 1]));
}

#[test]
fn worked_example_csv() {
    let out = run(&["worked-example", "--format", "csv"], "");
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("34,34,28,22,16,16"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn project_zero_sums_gives_zero_grid() {
    let v = run_json(
        &["project"],
        r#"{"m": 3, "n": 2, "row_sums": [0, 0], "col_sums": [0, 0, 0]}"#,
    );
    assert_eq!(v["f0"], json!([[0, 0, 0], [0, 0, 0]]));
    assert_eq!(v["norm_sq"], 0);
}

#[test]
fn numeric_projection_matches_exact() {
    let input = r#"{"m": 4, "n": 3, "row_sums": [2, 1, 3], "col_sums": [1, 2, 2, 1]}"#;
    let exact = run_json(&["project"], input);
    let numeric = run_json(&["project", "--method", "numeric"], input);
    assert_eq!(numeric["method"], "minimum_norm_numeric");
    for j in 0..3 {
        for i in 0..4 {
            let e = &exact["f0"][j][i];
            let e = match e {
                Value::String(s) => {
                    let (p, q) = s.split_once('/').unwrap();
                    p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap()
                }
                other => other.as_f64().unwrap(),
            };
            let x = numeric["f0"][j][i].as_f64().unwrap();
            assert!((e - x).abs() < 1e-9, "({i},{j}): {e} vs {x}");
        }
    }
}

#[test]
fn stability_without_binary_solution() {
    let out = run(
        &["stability"],
        r#"{"m": 2, "n": 2, "row_sums": [2, 0], "col_sums": [2, 0]}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], "no_binary_solution");
    assert!(v["detail"].is_string());
}

#[test]
fn sums_round_trip_through_project_and_intsolve() {
    let grid = json!({
        "grid": [[1, 0, 1, 1, 0], [0, 1, 1, 0, 0], [1, 1, 0, 0, 1], [0, 0, 1, 1, 1], [1, 0, 0, 1, 0]],
        "directions": [[1, 0], [0, 1], [1, 1]],
    });
    let sums = run_json(&["sums"], &grid.to_string());
    let directions = json!({"directions": [[1, 0], [0, 1], [1, 1]]});

    let f0 = run_json(&["project"], &sums.to_string());
    let mut again = directions.clone();
    again["grid"] = f0["f0"].clone();
    assert_eq!(run_json(&["sums"], &again.to_string()), sums);

    let f = run_json(&["intsolve"], &sums.to_string());
    assert_eq!(f["within_bound"], true);
    let mut again = directions;
    again["grid"] = f["grid"].clone();
    assert_eq!(run_json(&["sums"], &again.to_string()), sums);
}

#[test]
fn intsolve_construct() {
    let input = r#"{"m": 3, "n": 3, "row_sums": [1, 2, 0], "col_sums": [1, 1, 1]}"#;
    let v = run_json(&["intsolve", "--construct"], input);
    let rows: Vec<Vec<i64>> = serde_json::from_value(v["grid"].clone()).unwrap();
    let row_sums: Vec<i64> = rows.iter().map(|r| r.iter().sum()).collect();
    assert_eq!(row_sums, vec![1, 2, 0]);
}

#[test]
fn enumerate_streams_json_lines() {
    let input = r#"{"m": 3, "n": 3, "row_sums": [1, 1, 1], "col_sums": [1, 1, 1]}"#;
    let out = run(&["enumerate"], input);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let grids: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(grids.len(), 6);
    let capped = run(&["enumerate", "--cap", "4"], input);
    assert_eq!(String::from_utf8(capped.stdout).unwrap().lines().count(), 4);
}

#[test]
fn torus_project_constant() {
    let input = json!({
        "n": 3,
        "directions": [[1, 0], [0, 1]],
        "line_sums": {"1,0": [6, 6, 6], "0,1": [6, 6, 6]},
    });
    let v = run_json(&["torus-project"], &input.to_string());
    assert_eq!(v["f0"], json!([[2, 2, 2], [2, 2, 2], [2, 2, 2]]));
}

#[test]
fn torus_dependent_directions() {
    let input = json!({
        "n": 6,
        "directions": [[1, 2], [1, 4]],
        "line_sums": [[1, 1, 1, 1, 1, 1], [1, 1, 1, 1, 1, 1]],
    });
    let out = run(&["torus-project"], &input.to_string());
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], "dependent_directions");
}

#[test]
fn continuous_project_full_box() {
    let v = run_json(
        &["continuous-project"],
        r#"{"m": 2, "n": 3, "rects": [[0, 0, 2, 3]]}"#,
    );
    assert_eq!(v["measure"], 6);
    assert_eq!(v["col_profile"]["values"], json!([1]));
    assert_eq!(v["row_profile"]["values"], json!([1]));
    assert_eq!(v["constant"], -1);
}

#[test]
fn continuous_overlap_is_a_domain_error() {
    let out = run(
        &["continuous-project"],
        r#"{"m": 2, "n": 2, "rects": [[0, 0, 2, 2], [1, 1, 2, 2]]}"#,
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(run(&["project"], "{not json").status.code(), Some(2));
    assert_eq!(run(&["project"], r#"{"m": 2}"#).status.code(), Some(2));
    assert_eq!(run(&["project", "--bogus"], "{}").status.code(), Some(2));
    assert_eq!(
        run(&["project", "--input", "/nonexistent/instance.json"], "")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_is_deterministic() {
    let input = r#"{"m": 3, "n": 3, "directions": [[1, 0], [0, 1], [1, -1]],
        "line_sums": {"1,0": {"0": 2, "1": 2, "2": 1}, "0,1": {"0": 2, "-1": 1, "-2": 2},
                      "1,-1": {"0": 1, "1": 0, "2": 3, "3": 1, "4": 0}}}"#;
    for args in [
        &["project"][..],
        &["project", "--method", "numeric"],
        &["stability"],
    ] {
        let a = run(args, input);
        let b = run(args, input);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("linesum-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = run(&["paper-example", "--output", path.to_str().unwrap()], "");
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["t"], 13);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn generate_is_seeded_and_consistent() {
    let args = [
        "generate",
        "--m",
        "5",
        "--n",
        "4",
        "--direction",
        "1,0",
        "--direction",
        "0,1",
        "--direction",
        "1,1",
        "--seed",
        "11",
    ];
    let a = run(&args, "");
    let b = run(&args, "");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let generated: Value = serde_json::from_slice(&a.stdout).unwrap();
    let mut with_other_seed = args.to_vec();
    *with_other_seed.last_mut().unwrap() = "12";
    assert_ne!(run(&with_other_seed, "").stdout, a.stdout);

    let sums = run_json(&["sums"], &generated.to_string());
    assert_eq!(sums["line_sums"], generated["line_sums"]);
    let solutions = run(&["enumerate"], &generated.to_string());
    let grid = serde_json::to_string(&generated["grid"]).unwrap();
    assert!(String::from_utf8(solutions.stdout)
        .unwrap()
        .lines()
        .any(|l| l == grid));
}
