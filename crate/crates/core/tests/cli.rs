use std::path::Path;
use std::process::{Command, Output};

use smoothcvx::chain_qcqp::{closed_form_n1, Direction, Normalization};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_smoothcvx"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_spec(dir: &Path, name: &str, s: f64, n: usize, dir_: Direction) -> String {
    let spec = Normalization::default().spec(s, n, dir_).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&spec).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_passes_and_reports_the_violation() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("violation = 554/23040"), "{text}");
    assert!(text.contains("17545/23040") && text.contains("16991/23040"));
    assert!(text.contains("0 failed"));
    assert_eq!(run(&["verify", "--grid-spacing", "1/32"]).status.code(), Some(0));
}

#[test]
fn verify_json_report() {
    let o = run(&["verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.to_string().contains("554/23040"));
}

#[test]
fn perturbed_spline_fails_verification() {
    let o = run(&["verify", "--perturb-piece", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("[FAIL]") && l.contains("31/12")), "{text}");
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(run(&["verify", "--grid-spacing", "zero"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["sweep", "--mu-shrink", "3"]).status.code(), Some(64));
}

#[test]
fn contour_contains_the_witness() {
    let o = run(&["contour"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("x0,x1,piece,value\n"));
    assert!(text.lines().any(|l| l == "2,0,4,0.73745659722222223"));
    let small = stdout(&run(&["contour", "--xmin", "0", "--xmax", "1", "--ymin", "0", "--ymax", "1", "--nx", "3", "--ny", "3"]));
    assert_eq!(small.lines().count(), 10);
    assert!(small.lines().any(|l| l == "0,0,1,0"));
    assert!(small.lines().any(|l| l.starts_with("0.5,0.5,2,0.20798611111111")));
    let svg = stdout(&run(&["contour", "--nx", "21", "--ny", "21", "--format", "svg"]));
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn region_rows() {
    let text = stdout(&run(&["region", "--steps", "4"]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "t,inner_lo,inner_hi,outer_lo,outer_hi");
    assert_eq!(rows[3], "0.5,0.125,0.375,0,0.5");
    assert_eq!(rows.len(), 6);
}

#[test]
fn default_sweep() {
    let o = run(&["sweep", "--workers", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "s,N,B,U,status");
    assert_eq!(rows.len(), 241);
    assert!(rows[1..].iter().all(|r| r.ends_with(",Optimal")));
    assert!(rows[1].starts_with("0.5,1,"));
}

#[test]
fn sweep_outside_the_window_is_infeasible() {
    let o = run(&["sweep", "--s-min", "0.3", "--s-max", "0.45", "--s-steps", "3", "--N-list", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).lines().skip(1).all(|r| r.ends_with(",Infeasible")));
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--s-steps", "12", "--N-list", "1,5", "--seed", "7"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    let c = run(&[&args[..], &["--workers", "3"]].concat()).stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn solve_prints_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(dir.path(), "u.json", 0.6, 1, Direction::Upper);
    let o = run(&["solve", "--in", &path]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "Optimal");
    let spec = Normalization::default().spec(0.6, 1, Direction::Upper).unwrap();
    let (_, u1, _) = closed_form_n1(&spec);
    assert!((v["value"].as_f64().unwrap() - u1).abs() <= 1e-6);
    assert_eq!(v["chain"].as_array().unwrap().len(), 2);

    let low = write_spec(dir.path(), "b.json", 0.45, 2, Direction::Lower);
    assert_eq!(run(&["solve", "--in", &low]).status.code(), Some(2));
}

#[test]
fn malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"L\": 1.0").unwrap();
    assert_eq!(run(&["solve", "--in", bad.to_str().unwrap()]).status.code(), Some(4));
    std::fs::write(&bad, "{}").unwrap();
    assert_eq!(run(&["solve", "--in", bad.to_str().unwrap()]).status.code(), Some(4));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["solve", "--in", missing.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn interpolate_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(dir.path(), "u.json", 0.6, 5, Direction::Upper);
    let o = run(&["interpolate", "--in", &path, "--t-steps", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "t,value,dvalue");
    assert_eq!(rows.len(), 12);
    assert!(rows[1].starts_with("0,0,"));

    let one = write_spec(dir.path(), "one.json", 0.6, 1, Direction::Upper);
    let text = stdout(&run(&["interpolate", "--in", &one, "--t-steps", "4", "--lambda", "0.5"]));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(last[0], 1.0);
    assert!((last[1] - 0.30).abs() <= 1e-6, "{text}");
}

#[test]
fn out_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("region.csv");
    std::fs::write(&out, "stale").unwrap();
    let o = run(&["region", "--steps", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout(&run(&["region", "--steps", "4"])));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}
