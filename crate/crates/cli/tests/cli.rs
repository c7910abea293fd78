use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_nullwave"));
    c.env_remove("NULLWAVE_THREADS");
    c
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], config: &Path) -> Output {
    bin().args(args).arg("--config").arg(config).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const SURFACE_BASIC: &str =
    r#"{"slots": [[[[0, 0], [1, 0]]], [], [[[0, 0]], [[1, 0]]], [[[1, 0]]]], "normal_form": true}"#;
const SURFACE_BAD: &str = r#"{"slots": [[[[0, 0]], [[1, 0]]], [], [[[0, 0], [1, 0]]], [[[1, 0]]]]}"#;
const SMALL_GRID: &str = r#"{"t": [-0.5, 0.5, 3], "x1": [-0.5, 0.5, 3], "x2": [0.7, 1.3, 3], "x3": [-0.5, 0.5, 3]}"#;

#[test]
fn verify_q_passes_with_tiny_residuals() {
    let d = TempDir::new().unwrap();
    let cfg = write(d.path(), "q.json", r#"{"schema": 1, "source": {"builtin": "q"}}"#);
    let out = d.path().join("q.csv");
    let o = run(&["verify", "--out", out.to_str().unwrap()], &cfg);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 625);
    for (k, name) in header.iter().enumerate().skip(5) {
        if *name == "coincident" {
            continue;
        }
        for r in &rows {
            assert!(r[k].parse::<f64>().unwrap() <= 1e-9, "{name} = {}", r[k]);
        }
    }
}

#[test]
fn verify_t_fails_the_verdict() {
    let d = TempDir::new().unwrap();
    let cfg = write(
        d.path(),
        "t.json",
        r#"{"schema": 1, "source": {"builtin": "t"}, "format": "json"}"#,
    );
    let o = run(&["verify"], &cfg);
    assert_eq!(code(&o), 3);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"]["pass"], false);
    for p in v["points"].as_array().unwrap() {
        assert!((p["det"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    }
}

#[test]
fn bad_input_exits_two() {
    let d = TempDir::new().unwrap();
    let cases = [
        r#"{"schema": 1, "source": "#,
        r#"{"schema": 1, "source": {"builtin": "nope"}}"#,
        r#"{"schema": 1, "source": {"builtin": "q"}, "extra": true}"#,
    ];
    for (k, body) in cases.iter().enumerate() {
        let cfg = write(d.path(), &format!("bad{k}.json"), body);
        assert_eq!(code(&run(&["verify"], &cfg)), 2, "{body}");
    }
    let missing = d.path().join("missing.json");
    assert_eq!(code(&run(&["verify"], &missing)), 2);
    assert_eq!(code(&bin().arg("verify").output().unwrap()), 2);
    assert_eq!(code(&bin().arg("frobnicate").output().unwrap()), 2);
    let cfg = write(d.path(), "q.json", r#"{"schema": 1, "source": {"builtin": "q"}}"#);
    let o = bin()
        .args(["verify", "--config"])
        .arg(&cfg)
        .env("NULLWAVE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

fn classify(dir: &Path, v: &str) -> (i32, serde_json::Value) {
    let body =
        format!(r#"{{"schema": 1, "source": {{"builtin": "q"}}, "point": [0.1, 0.2, 0.3, 0.4], "direction": {v}}}"#);
    let cfg = write(dir, "c.json", &body);
    let o = run(&["classify"], &cfg);
    (code(&o), serde_json::from_slice(&o.stdout).unwrap())
}

#[test]
fn classify_examples() {
    let d = TempDir::new().unwrap();
    let (c, v) = classify(d.path(), "[1, -1, 0, 0]");
    assert_eq!((c, v["branch"].as_str()), (0, Some("XiBranch")));
    let (c, v) = classify(d.path(), "[1, 0, 0, 0]");
    assert_eq!((c, v["error"].as_str()), (3, Some("not_null")));
    let (c, v) = classify(d.path(), "[1, 0, 1, 0]");
    assert_eq!((c, v["branch"].as_str()), (0, Some("NotInKernel")));
}

#[test]
fn generate_surface_matches_closed_form() {
    let d = TempDir::new().unwrap();
    let body = format!(r#"{{"schema": 1, "source": {{"surface": {SURFACE_BASIC}}}, "grid": {SMALL_GRID}}}"#);
    let cfg = write(d.path(), "s.json", &body);
    let o = run(&["generate"], &cfg);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    let mut n = 0;
    for line in csv.lines().skip(1) {
        let c: Vec<f64> = line.split(',').filter_map(|s| s.parse().ok()).collect();
        let (t, x1, x2, x3) = (c[0], c[1], c[2], c[3]);
        let z = num_complex::Complex64::new(c[4], c[5]);
        let expect = -(t - x1) / num_complex::Complex64::new(x2, -x3);
        assert!((z - expect).norm() <= 1e-10);
        n += 1;
    }
    assert_eq!(n, 81);
}

#[test]
fn generate_kerr_at_the_base_point() {
    let d = TempDir::new().unwrap();
    let body = r#"{"schema": 1, "format": "json",
        "source": {"kerr": {"f": {"num": [[0, 0], [1, 0]]}, "g": {"num": []}, "h": {"num": [[1, 0]]}}},
        "grid": {"t": [0, 0, 1], "x1": [0, 0, 1], "x2": [1, 1, 1], "x3": [0, 0, 1]}}"#;
    let cfg = write(d.path(), "k.json", body);
    let o = run(&["generate"], &cfg);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let z = &v["points"][0]["z"];
    assert!((z[0].as_f64().unwrap() + 1.0).abs() < 1e-12 && z[1].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn generate_rejects_surfaces_outside_normal_form() {
    let d = TempDir::new().unwrap();
    let body = format!(r#"{{"schema": 1, "source": {{"surface": {SURFACE_BAD}}}, "grid": {SMALL_GRID}}}"#);
    let cfg = write(d.path(), "b.json", &body);
    assert_eq!(code(&run(&["generate"], &cfg)), 3);
    // verify is not a generator-only command but still reports the failure
    let verify = format!(r#"{{"schema": 1, "source": {{"surface": {SURFACE_BAD}}}, "grid": {SMALL_GRID}}}"#);
    let cfg = write(d.path(), "v.json", &verify);
    assert_eq!(code(&run(&["verify"], &cfg)), 3);
}

#[test]
fn unreachable_points_are_numeric_failures() {
    // x = (0, 0, 1, 0) on [w, zw, z, 1] has a vanishing bracket
    let d = TempDir::new().unwrap();
    let body = r#"{"schema": 1,
        "source": {"surface": {"slots": [[[[0, 0], [1, 0]]], [[[0, 0]], [[0, 0], [1, 0]]], [[[0, 0]], [[1, 0]]], [[[1, 0]]]]}},
        "grid": {"t": [0, 0, 1], "x1": [0, 0, 1], "x2": [1, 1, 1], "x3": [0, 0, 1]}}"#;
    let cfg = write(d.path(), "n.json", body);
    assert_eq!(code(&run(&["generate"], &cfg)), 4);
    assert_eq!(code(&run(&["verify"], &cfg)), 4);
}

#[test]
fn overrides_take_precedence() {
    let d = TempDir::new().unwrap();
    let cfg = write(
        d.path(),
        "u.json",
        r#"{"schema": 1, "source": {"builtin": "u"}, "format": "csv"}"#,
    );
    let o = run(&["verify", "--format", "json", "--h", "1e-4"], &cfg);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["scheme"], "central(h=0.0001)");
    // an absurdly tight threshold turns the same run into a verdict failure
    let o = run(&["verify", "--h", "1e-2", "--tol", "1e-300"], &cfg);
    assert_eq!(code(&o), 3);
}

#[test]
fn reports_are_byte_identical_across_runs_and_workers() {
    let d = TempDir::new().unwrap();
    let cfg = write(
        d.path(),
        "k.json",
        r#"{"schema": 1, "source": {"builtin": "kerr-basic"}}"#,
    );
    let outputs: Vec<Vec<u8>> = [None, Some("1"), Some("3"), None]
        .iter()
        .map(|t| {
            let mut c = bin();
            c.args(["verify", "--config"]).arg(&cfg);
            if let Some(t) = t {
                c.env("NULLWAVE_THREADS", t);
            }
            let o = c.output().unwrap();
            assert_eq!(code(&o), 0);
            o.stdout
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}
