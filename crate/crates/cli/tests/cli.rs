use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recoupling")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn graph_file(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "graphs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn spectrum_from_file() {
    let o = run(&["spectrum", "--graph", &graph_file("g4.txt"), "--ell", "1,1,1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "PASS");
    let ev: Vec<u64> = v["spectrum"].as_array().unwrap().iter().map(|e| e["eigenvalues"]["e1"].as_u64().unwrap()).collect();
    assert_eq!(ev, vec![0, 8]);
}

#[test]
fn spectrum_odd_sum_is_a_precondition_failure() {
    let o = run(&["spectrum", "--ell", "1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sum odd"));
    let o = run(&["spectrum", "--ell", "1,1,4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectrum_cat5() {
    let o = run(&["spectrum", "--graph", "cat5", "--ell", "1,1,1,1,2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("coloring,e1,e2"));
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn spectrum_inline_graph_and_unknown_graph() {
    let o = run(&["spectrum", "--graph", "A: h2 h3 e1; B: e1 h4 h1", "--ell", "2,2,2,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["spectrum", "--graph", "nosuchgraph", "--ell", "1,1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn overlap_checks_against_racah() {
    let o = run(&["overlap", "--ell", "1,1,2,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["racah_check"], "PASS");
    assert_eq!(v["unitary"], true);
    let o = run(&["overlap", "--graph", &graph_file("g4p.txt"), "--graph2", "g4p", "--ell", "1,1,1,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["racah_check"], "n/a");
}

#[test]
fn sweep_csv_header_and_order() {
    let o = run(&["sweep", "--k-range", "10:30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("k,m,m_prime,sqrtE,sqrtEp,exact_6j,asymptotic_6j,abs_err,envelope"));
    let ks: Vec<u32> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ks, (10..=30).collect::<Vec<_>>());
    assert!(stderr(&o).contains("slope="));
}

#[test]
fn sweep_single_k_and_bad_targets() {
    let o = run(&["sweep", "--k", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
    assert!(stderr(&o).contains("slope=none"));
    let o = run(&["sweep", "--ell", "1,1,1,1", "--target-E", "9", "--target-Ep", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_verdict_failure_exits_one() {
    let o = run(&["sweep", "--k-range", "10:40", "--tol-slope", "-5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bend_full_period_is_periodic() {
    let o = run(&["bend", "--graph", "cat5", "--ell", "1,1,1,1,2", "--schedule", "e1:1,e2:1", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("PERIODIC"));
    // λ columns constant
    let out = stdout(&o);
    let rows: Vec<Vec<String>> = out.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    for col in [3, 4] {
        let first: f64 = rows[0][col].parse().unwrap();
        for r in &rows {
            assert!((r[col].parse::<f64>().unwrap() - first).abs() < 1e-9);
        }
    }
    assert_eq!(rows.first().unwrap().last(), rows.last().unwrap().last());
}

#[test]
fn bend_half_period_moves() {
    let o = run(&["bend", "--graph", "g4", "--ell", "1,1,1,1", "--schedule", "e1:0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("MOVED (expected MOVED)"));
}

#[test]
fn bend_rejects_boundary_start() {
    let o = run(&["bend", "--ell", "1,1,1,1", "--point", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let args = ["bend", "--graph", "star6", "--ell", "1,1,1,1,1,1", "--seed", "42", "--schedule", "ea:0.3,eb:1"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["sweep", "--k-range", "10:25", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn tetra_report() {
    let o = run(&["tetra", "--lengths", "2,2,2,2,2,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["V"].as_f64().unwrap() - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
    assert!((v["omega"].as_f64().unwrap() - 2f64.sqrt() / 2.0).abs() < 1e-12);
    assert!(v["alpha"]["hp"].is_number());
    let o = run(&["tetra", "--target-E", "9", "--target-Ep", "9", "--ell", "1,1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sixj_value() {
    let o = run(&["sixj", "--labels", "1,1,0,1,1,0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact"], "-1/2");
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("recoupling-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("colorings.json");
    let o = run(&["colorings", "--graph", "star6", "--ell", "1,1,1,1,1,1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["count"], 5);
    std::fs::remove_dir_all(dir).unwrap();
}
