use std::path::Path;
use std::process::{Command, Output};

use alphakit::exit;
use alphakit::formats::{read_field_csv, FieldRow, ReportJson};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphakit"))
        .args(args)
        .env("ALPHAKIT_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> u8 {
    u8::try_from(o.status.code().expect("exit code")).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn field(path: &Path) -> Vec<FieldRow> {
    read_field_csv(std::fs::File::open(path).unwrap()).unwrap()
}

fn kernel_value(o: &Output) -> (f64, String) {
    assert_eq!(code(o), exit::OK, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(o);
    let line = text.lines().nth(1).unwrap().to_string();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == "value_re").unwrap();
    (line.split(',').nth(i).unwrap().parse().unwrap(), line)
}

#[test]
fn kernel_examples() {
    let (p, _) = kernel_value(&run(&["kernel", "poisson", "--alpha", "1", "--z", "0"]));
    assert!((p - 1.0).abs() < 1e-12);

    let (h, line) = kernel_value(&run(&["kernel", "h", "--alpha", "0", "--s", "0.5"]));
    assert!((h - std::f64::consts::LN_2).abs() < 1e-14);
    assert!(!line.ends_with(','), "h carries a bound for α ≥ 0: {line}");

    // at α = 0 the kernel is log|(z − w)/(1 − z w̄)|²
    let (g, _) = kernel_value(&run(&["kernel", "green", "--alpha", "0", "--z", "0.5", "--w", "-0.5"]));
    assert!((g - 0.64f64.ln()).abs() < 1e-14);
    let (g0, _) = kernel_value(&run(&["kernel", "green", "--alpha", "0", "--z", "0.5", "--w", "0"]));
    assert!((g0 - 0.25f64.ln()).abs() < 1e-14);

    let same = run(&["kernel", "green", "--z", "0.3", "--w", "0.3"]);
    assert_eq!(code(&same), exit::INVALID);
}

#[test]
fn kernel_broadcast_and_points_file() {
    let dir = TempDir::new().unwrap();
    let o = run(&["kernel", "green", "--alpha", "1", "--z", "0.1", "--z", "0.2,0.1", "--z", "-0.3", "--w", "0.5"]);
    assert_eq!(code(&o), exit::OK);
    assert_eq!(stdout(&o).lines().count(), 4);

    let pts = write(&dir, "p.csv", "z_re,z_im\n0,0\n0.5,0.5\n");
    let out = dir.path().join("k.csv");
    let o = run(&["kernel", "poisson", "--points", &pts, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), exit::OK);
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("z_re,z_im,value_re,value_im,abs_bound\n"));
    assert_eq!(text.lines().count(), 3);

    let bad = write(&dir, "bad.csv", "x,y\n0,0\n");
    assert_eq!(code(&run(&["kernel", "poisson", "--points", &bad])), exit::INVALID);
    assert_eq!(code(&run(&["kernel", "poisson", "--points", "/nonexistent/points.csv"])), exit::IO);
}

#[test]
fn solve_sharp_case_constant_and_empty() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.json", r#"{"fourier": {}}"#);
    let one = write(&dir, "one.json", r#"{"fourier": {"0": [1, 0]}}"#);
    let grid = ["--grid", "polar:4x8", "--r-max", "0.9"];

    let out = dir.path().join("sharp.csv");
    let summary = dir.path().join("sharp.json");
    let mut args = vec!["solve", "--boundary", &empty, "--source-const", "-1", "--out", out.to_str().unwrap()];
    args.extend(["--summary", summary.to_str().unwrap()]);
    args.extend(grid);
    let o = run(&args);
    assert_eq!(code(&o), exit::OK, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = field(&out);
    assert_eq!(rows.len(), 1 + 4 * 8);
    for r in &rows {
        let expect = 1.0 - r.point().norm_sqr();
        assert!((r.value().re - expect).abs() < 1e-6 && r.value().im.abs() < 1e-6, "{r:?}");
    }
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
    assert_eq!(s["certified"], true);
    assert_eq!(s["points"], 33);

    for (file, value) in [(&one, 1.0), (&empty, 0.0)] {
        let out = dir.path().join("c.csv");
        let mut args = vec!["solve", "--alpha", "1.5", "--boundary", file, "--out", out.to_str().unwrap()];
        args.extend(grid);
        assert_eq!(code(&run(&args)), exit::OK);
        for r in field(&out) {
            assert!((r.value().re - value).abs() < 1e-9 && r.value().im.abs() < 1e-9, "{r:?}");
        }
    }

    // stdout carries the CSV when there is no --out
    let o = run(&["solve", "--boundary", &one, "--grid", "polar:2x4"]);
    assert_eq!(code(&o), exit::OK);
    assert_eq!(read_field_csv(o.stdout.as_slice()).unwrap().len(), 9);
}

#[test]
fn solve_config_file_and_flag_override() {
    let dir = TempDir::new().unwrap();
    let one = write(&dir, "one.json", r#"{"fourier": {"1": [0.5, 0]}}"#);
    let cfg = write(&dir, "run.json", r#"{"alpha": 2.0, "grid": "polar:3x6", "r_max": 0.8}"#);
    let o = run(&["solve", "--config", &cfg, "--boundary", &one, "--grid", "polar:2x4"]);
    assert_eq!(code(&o), exit::OK);
    let rows = read_field_csv(o.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.point().norm() <= 0.8 + 1e-12));

    let bad = write(&dir, "bad.json", r#"{"alpha": 2.0, "colour": 1}"#);
    assert_eq!(code(&run(&["solve", "--config", &bad, "--boundary", &one])), exit::INVALID);
    assert_eq!(code(&run(&["solve", "--alpha", "-1", "--boundary", &one])), exit::INVALID);
}

#[test]
fn solve_not_certified_under_tiny_tolerance() {
    let dir = TempDir::new().unwrap();
    let b = write(&dir, "b.json", r#"{"fourier": {"2": [0.3, 0.1], "-1": [0.2, 0]}}"#);
    let o = run(&["solve", "--alpha", "1", "--boundary", &b, "--source-const", "0.5", "--grid", "polar:2x4", "--tolerance", "1e-30"]);
    assert_eq!(code(&o), exit::NOT_CERTIFIED, "{}", String::from_utf8_lossy(&o.stderr));
}

fn report(o: &Output) -> Vec<ReportJson> {
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    match v {
        serde_json::Value::Array(a) => a.into_iter().map(|r| serde_json::from_value(r).unwrap()).collect(),
        r => vec![serde_json::from_value(r).unwrap()],
    }
}

#[test]
fn verify_schwarz_sharp_case() {
    let o = run(&["verify", "schwarz", "--sharp-case", "--grid", "polar:4x8"]);
    assert_eq!(code(&o), exit::OK, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    assert!(r.iter().all(|r| r.passed && r.violations.is_empty()));
    assert!(r[0].metric("max_gap").unwrap() < 1e-9);
}

#[test]
fn verify_schwarz_requires_centering() {
    let dir = TempDir::new().unwrap();
    let b = write(&dir, "b.json", r#"{"fourier": {"0": [0.5, 0], "1": [0.3, 0]}}"#);
    let args = ["verify", "schwarz", "--boundary", &b, "--grid", "polar:3x8"];
    assert_eq!(code(&run(&args)), exit::PRECONDITION);
    let mut centered = args.to_vec();
    centered.push("--auto-center");
    assert_eq!(code(&run(&centered)), exit::OK);
}

#[test]
fn verify_composition_dichotomy() {
    let rot = run(&["verify", "composition", "--psi", "rotation:1.1", "--grid", "polar:3x8"]);
    assert_eq!(code(&rot), exit::OK, "{}", String::from_utf8_lossy(&rot.stderr));
    assert!(report(&rot)[0].passed);

    let ex = run(&["verify", "composition", "--psi", "square", "--example1", "k=1", "--grid", "polar:3x8"]);
    assert_eq!(code(&ex), exit::OK, "{}", String::from_utf8_lossy(&ex.stderr));

    let dil = run(&["verify", "composition", "--psi", "dilation:0.5", "--grid", "polar:3x8"]);
    assert_eq!(code(&dil), exit::OK);
    let r = &report(&dil)[0];
    assert!(r.passed);
    assert_eq!(r.metric("expected_alpha_harmonic"), Some(0.0));
    assert!(r.metric("max_residual").unwrap() > 1e-2);

    // a rotation cannot reach residual 1e-20, so the expected dichotomy fails
    let tight = run(&["verify", "composition", "--psi", "rotation:1.1", "--grid", "polar:3x8", "--tolerance", "1e-20"]);
    assert_eq!(code(&tight), exit::NOT_PASSED);
    assert!(!report(&tight)[0].passed);
}

#[test]
fn series_constant_conjugate_and_random() {
    let dir = TempDir::new().unwrap();
    let constant = write(&dir, "c.json", r#"{"alpha": 1.5, "coeffs": {"0": [1, 0]}}"#);
    let o = run(&["series", "--coeffs", &constant, "--grid", "polar:3x8"]);
    assert_eq!(code(&o), exit::OK);
    for r in read_field_csv(o.stdout.as_slice()).unwrap() {
        assert!((r.value() - 1.0).norm() < 1e-14);
    }

    let conj = write(&dir, "z.json", r#"{"alpha": 0, "coeffs": {"-1": [1, 0]}}"#);
    let o = run(&["series", "--coeffs", &conj, "--grid", "polar:3x8"]);
    assert_eq!(code(&o), exit::OK);
    for r in read_field_csv(o.stdout.as_slice()).unwrap() {
        assert!((r.value() - r.point().conj()).norm() < 1e-14, "{r:?}");
        assert!((r.fzbar_re - 1.0).abs() < 1e-14 && r.fzbar_im.abs() < 1e-14);
    }

    let o = run(&["series", "--random-terms", "3", "--seed", "5", "--alpha", "1", "--grid", "polar:2x4"]);
    assert_eq!(code(&o), exit::OK, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read_field_csv(o.stdout.as_slice()).unwrap().len(), 9);

    let malformed = write(&dir, "m.json", r#"{"alpha": 1, "coeffs": {"one": [1, 0]}}"#);
    assert_eq!(code(&run(&["series", "--coeffs", &malformed])), exit::INVALID);
}

#[test]
fn parse_errors_exit_invalid() {
    assert_eq!(code(&run(&["kernel", "nope"])), exit::INVALID);
    assert_eq!(code(&run(&["solve", "--grid", "hex:3"])), exit::INVALID);
    assert_eq!(code(&run(&["verify", "composition", "--psi", "cube"])), exit::INVALID);
}
