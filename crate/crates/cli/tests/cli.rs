use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use symkron_core::io::{self, MatrixJson, ParamsJson};
use symkron_core::random::SeededRng;
use symkron_core::ComplexMatrix;

fn symkron(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symkron")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn params_file(dir: &TempDir, a: &ComplexMatrix, b: &ComplexMatrix, hbar: f64) -> PathBuf {
    write(dir, "params.json", &io::to_json_string(&ParamsJson::new(a, b, hbar)))
}

#[test]
fn enumerate_examples() {
    let o = symkron(&["enumerate", "--dim", "2", "--order", "3"]);
    assert_eq!(json_out(&o), json!([[3, 0], [2, 1], [1, 2], [0, 3]]));
    let o = symkron(&["enumerate", "--dim", "2", "--order", "2", "--redundant"]);
    assert_eq!(json_out(&o), json!([[2, 0], [1, 1], [1, 1], [0, 2]]));
    let o = symkron(&["enumerate", "--dim", "1", "--order", "5"]);
    assert_eq!(json_out(&o), json!([[5]]));
    let o = symkron(&["enumerate", "--dim", "3", "--order", "10", "--redundant"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn basis_triplets() {
    for (d, n, count) in [(2, 2, 4), (2, 3, 8), (3, 2, 9)] {
        let v = json_out(&symkron(&["basis", "--dim", &d.to_string(), "--order", &n.to_string()]));
        assert_eq!(v["triplets"].as_array().unwrap().len(), count);
    }
    let v = json_out(&symkron(&["basis", "--dim", "1", "--order", "4"]));
    assert_eq!(v["triplets"], json!([[1, 1, 1.0]]));

    let dir = TempDir::new().unwrap();
    let out = dir.path().join("p.json");
    assert_eq!(code(&symkron(&["basis", "--dim", "2", "--order", "2", "--out", s(&out)])), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let half = 1.0 / 2f64.sqrt();
    assert_eq!(v["triplets"], json!([[1, 1, 1.0], [2, 2, half], [2, 3, half], [3, 4, 1.0]]));
}

#[test]
fn apply_identity_echoes_vector() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", "[[[1,0],[0,0]],[[0,0],[1,0]]]");
    let y = write(
        &dir,
        "y.json",
        r#"{"dim":2,"order":2,"data":[[0.1,0.2],[-3.5,0],[1e-7,4.25]]}"#,
    );
    let v = json_out(&symkron(&["apply", "--matrix", s(&m), "--order", "2", "--vector", s(&y), "--labels"]));
    assert_eq!(v["data"], json!([[0.1, 0.2], [-3.5, 0.0], [1e-7, 4.25]]));
    assert_eq!(v["labels"], json!([[2, 0], [1, 1], [0, 2]]));
}

#[test]
fn apply_check_reports_oracle_residual() {
    let dir = TempDir::new().unwrap();
    let mut rng = SeededRng::new(5);
    let m = rng.complex_matrix(3, 3);
    let data: Vec<[f64; 2]> = rng.complex_vector(15).iter().map(|z| [z.re, z.im]).collect();
    let mp = write(&dir, "m.json", &io::to_json_string(&MatrixJson::from(&m)));
    let yp = write(&dir, "y.json", &json!({"dim": 3, "order": 4, "data": data}).to_string());
    let v = json_out(&symkron(&["apply", "--matrix", s(&mp), "--order", "4", "--vector", s(&yp), "--check"]));
    assert!(v["oracle_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn apply_error_codes() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", "[[[1,0],[0,0]],[[0,0],[1,0]]]");
    let bad = write(&dir, "bad.json", "{not json");
    let y3 = write(&dir, "y3.json", r#"{"dim":3,"order":1,"data":[[1,0],[0,0],[0,0]]}"#);
    let o = symkron(&["apply", "--matrix", s(&m), "--order", "1", "--vector", s(&bad)]);
    assert_eq!(code(&o), 3);
    let o = symkron(&["apply", "--matrix", s(&m), "--order", "1", "--vector", s(&y3)]);
    assert_eq!(code(&o), 4);
    let o = symkron(&["apply", "--matrix", s(&m), "--order", "1"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn check_is_deterministic_and_passes() {
    let args = ["check", "--dim", "2", "--order", "3", "--trials", "5", "--seed", "7"];
    let a = symkron(&args);
    let b = symkron(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("result PASS\n"));
}

#[test]
fn check_failure_writes_replay() {
    let dir = TempDir::new().unwrap();
    let replay = dir.path().join("replay.json");
    let o = symkron(&[
        "check",
        "--dim",
        "2",
        "--order",
        "2",
        "--trials",
        "3",
        "--force-non-unitary",
        "--replay-out",
        s(&replay),
    ]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&replay).unwrap()).unwrap();
    assert_eq!(v["suite"], "unitary");
    assert!(v["matrix"].is_array());
}

#[test]
fn check_refuses_beyond_cap() {
    assert_eq!(code(&symkron(&["check", "--dim", "3", "--order", "10"])), 2);
}

#[test]
fn wavepacket_flow_at_zero_echoes() {
    let dir = TempDir::new().unwrap();
    let (a, b) = SeededRng::new(11).valid_pair(2);
    let p = params_file(&dir, &a, &b, 0.5);
    let v = json_out(&symkron(&["wavepacket", "flow", "--params", s(&p), "--t", "0"]));
    let (a0, b0, hbar) = io::read_params(&v.to_string()).unwrap();
    assert!(a0.distance(&a) <= 1e-15 && b0.distance(&b) <= 1e-15 && hbar == 0.5);
    let v = json_out(&symkron(&["wavepacket", "flow", "--params", s(&p), "--t", "0", "--t", "-1.5"]));
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["t"], json!(-1.5));
}

#[test]
fn wavepacket_realign_spd_gives_identity() {
    let dir = TempDir::new().unwrap();
    let a = ComplexMatrix::from_real_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
    let b = a.inverse().unwrap();
    let p = params_file(&dir, &a, &b, 1.0);
    let v = json_out(&symkron(&["wavepacket", "realign", "--params", s(&p)]));
    let u = io::read_matrix(&v["U"].to_string()).unwrap();
    assert!(u.distance(&ComplexMatrix::identity(2)) <= 1e-12);
    assert_eq!(v["mode"], "polar");
}

#[test]
fn wavepacket_transform_cross_check() {
    let dir = TempDir::new().unwrap();
    let mut rng = SeededRng::new(12);
    let (a, b) = rng.valid_pair(2);
    let p = params_file(&dir, &a, &b, 1.0);
    let u = write(&dir, "u.json", &io::to_json_string(&MatrixJson::from(&rng.unitary(2))));
    let pts = write(&dir, "pts.csv", "x1,x2\n0.1,0.2\n-0.5,0.3\n# comment\n1.0,-1.0\n");
    for extra in [vec!["--unitary", s(&u)], vec!["--realign", "svd"]] {
        let mut args = vec!["wavepacket", "transform", "--params", s(&p), "--order", "3", "--points", s(&pts)];
        args.extend(extra);
        let v = json_out(&symkron(&args));
        assert_eq!(v["cross_check"]["points"], 3);
        assert!(v["cross_check"]["max_error"].as_f64().unwrap() <= 1e-10);
        assert_eq!(v["T"].as_array().unwrap().len(), 4);
        assert_eq!(v["branch"], "principal");
    }
}

#[test]
fn wavepacket_eval_formats() {
    let dir = TempDir::new().unwrap();
    let id = ComplexMatrix::identity(2);
    let p = params_file(&dir, &id, &id, 1.0);
    let pts = write(&dir, "pts.csv", "0,0\n0.5,-0.25\n");
    let o = symkron(&["wavepacket", "eval", "--params", s(&p), "--order", "2", "--points", s(&pts)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k1,k2,x1,x2,re,im"));
    assert_eq!(lines.count(), 6);

    let args = ["wavepacket", "eval", "--params", s(&p), "--order", "0", "--k", "0,0", "--points", s(&pts)];
    let mut args = args.to_vec();
    args.extend(["--format", "json"]);
    let v = json_out(&symkron(&args));
    let phi0 = v["values"][0][0][0].as_f64().unwrap();
    assert!((phi0 - std::f64::consts::PI.powf(-0.5)).abs() <= 1e-15);
}

#[test]
fn wavepacket_invalid_params_exit_five() {
    let dir = TempDir::new().unwrap();
    let id = ComplexMatrix::identity(2);
    let p = params_file(&dir, &id, &id.scale(symkron_core::C64::new(2.0, 0.0)), 1.0);
    let o = symkron(&["wavepacket", "realign", "--params", s(&p)]);
    assert_eq!(code(&o), 5);
}

#[test]
fn bench_rows_and_cap() {
    let o = symkron(&["bench", "--dim", "3", "--order-range", "6..8"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("dim,order,rep,L_n"));
    assert!(!rows[1].contains("capped"));
    assert!(rows[3].contains("capped"));
}

#[test]
fn config_supplies_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"command": ["enumerate"], "dim": 2, "order": 1}"#);
    assert_eq!(json_out(&symkron(&["--config", s(&cfg)])), json!([[1, 0], [0, 1]]));
    let o = symkron(&["enumerate", "--order", "2", "--config", s(&cfg)]);
    assert_eq!(json_out(&o), json!([[2, 0], [1, 1], [0, 2]]));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(code(&symkron(&["enumerate", "--dim", "x", "--order", "1"])), 3);
    assert_eq!(code(&symkron(&["nonsense"])), 3);
    assert_eq!(code(&symkron(&["--help"])), 0);
}
