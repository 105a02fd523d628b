use std::path::Path;
use std::process::{Command, Output};

fn ffc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffc"))
        .args(args)
        .env_remove("FFC_THREADS")
        .output()
        .expect("run ffc")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dim_prints_koch_estimate() {
    let out = ffc(&["dim", "--curve", "koch", "--level", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let d = v["gamma_dimension"].as_f64().unwrap();
    assert!((d - 4f64.ln() / 3f64.ln()).abs() < 0.01, "{d}");
}

#[test]
fn verify_passes_and_fails_by_tolerance() {
    assert_eq!(
        ffc(&[
            "verify",
            "--builtin",
            "example1",
            "--case",
            "I",
            "--tol",
            "1e-6"
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        ffc(&[
            "verify",
            "--builtin",
            "example1",
            "--case",
            "II",
            "--tol",
            "1e-6"
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        ffc(&["verify", "--builtin", "example2"]).status.code(),
        Some(0)
    );
    assert_eq!(
        ffc(&["verify", "--builtin", "example1", "--tol", "1e-20"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\n  \"rhs\": {\"kind\": \"builtin\",\n  \"name\" 3}\n}\n",
    )
    .unwrap();
    let out = ffc(&["solve", "--spec", arg(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("column"), "{err}");

    assert_eq!(
        ffc(&["solve", "--builtin", "example7"]).status.code(),
        Some(1)
    );
    assert_eq!(ffc(&["solve"]).status.code(), Some(1));
    assert_eq!(ffc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        ffc(&["solve", "--builtin", "example1", "--r-points", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn divergence_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("blowup.json");
    std::fs::write(
        &spec,
        r#"{"rhs":{"kind":"linear","a":1e10,"c":{"kind":"triangular","a":0,"b":0,"c":0}},
            "x0":{"kind":"triangular","a":0,"b":1,"c":2},"j_steps":16}"#,
    )
    .unwrap();
    let out = ffc(&["solve", "--spec", arg(&spec)]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn case_two_csv_flips_validity_near_ln2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sol.csv");
    assert_eq!(
        ffc(&[
            "solve",
            "--builtin",
            "example1",
            "--case",
            "II",
            "--out",
            arg(&path)
        ])
        .status
        .code(),
        Some(0)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,J,r,lower,upper,valid"));
    let flip = lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f[5] == "0")
        .map(|f| f[1].parse::<f64>().unwrap())
        .unwrap();
    assert!(
        (flip - std::f64::consts::LN_2).abs() < 2.0 / 256.0,
        "{flip}"
    );
}

#[test]
fn verify_from_csv_matches_in_memory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sol.csv");
    for case in ["I", "II"] {
        ffc(&[
            "solve",
            "--builtin",
            "example1",
            "--case",
            case,
            "--out",
            arg(&path),
        ]);
        let fresh = ffc(&["verify", "--builtin", "example1", "--case", case]);
        let loaded = ffc(&[
            "verify",
            "--builtin",
            "example1",
            "--case",
            case,
            "--solution",
            arg(&path),
        ]);
        assert_eq!(fresh.status.code(), Some(0));
        let a: serde_json::Value = serde_json::from_slice(&fresh.stdout).unwrap();
        let b: serde_json::Value = serde_json::from_slice(&loaded.stdout).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn staircase_and_curve_csv() {
    let out = ffc(&[
        "staircase",
        "--curve",
        "koch",
        "--level",
        "2",
        "--alpha",
        "1.2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("u,J\n"));
    assert_eq!(text.lines().count(), 1 + 17);

    let out = ffc(&["curve", "--curve", "segment", "--level", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("u,x,y\n"));
    assert_eq!(text.lines().count(), 1 + 9);
}

#[test]
fn curve_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("curve.json");
    std::fs::write(
        &spec,
        r#"{"kind":"polyline","params":[0,1],"points":[[0,0],[1,0]],"refine":"koch","level":5}"#,
    )
    .unwrap();
    let out = ffc(&["dim", "--spec", arg(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["gamma_dimension"].as_f64().unwrap() - 1.2619).abs() < 0.05);
}

#[test]
fn integrate_and_differentiate() {
    let out = ffc(&[
        "integrate",
        "--curve",
        "segment",
        "--level",
        "10",
        "--alpha",
        "1",
        "--function",
        "exp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let got = v["integral"]["value"].as_f64().unwrap();
    assert!((got - (1f64.exp() - 1.0)).abs() < 1e-6);

    let out = ffc(&[
        "differentiate",
        "--curve",
        "segment",
        "--level",
        "10",
        "--alpha",
        "1",
        "--function",
        "j2",
        "--at",
        "0.3",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["derivative"].as_f64().unwrap() - 0.6).abs() < 1e-9);
}

#[test]
fn bad_thread_cap_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_ffc"))
        .args(["verify", "--builtin", "example1"])
        .env("FFC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
