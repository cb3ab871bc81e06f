use std::process::Command;

use epr2::harness::cli::run;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("epr2").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
}

#[test]
fn concurrence_of_werner() {
    let (code, out) = call(&["concurrence", "--state", "werner:x=0.6"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "0.4");
}

#[test]
fn pq_table() {
    let (code, out) = call(&["pq", "--state", "pure:theta=0", "--A", "0,0,1", "--B", "0,0,1"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "P(+,+)"), "1");
    assert_eq!(value(&out, "P(-,-)"), "0");
    let (code, _) = call(&["pq", "--state", "werner:x=0.5", "--A", "-1,0,0", "--B", "0,-1,0"]);
    assert_eq!(code, 0);
}

#[test]
fn check_gen_werner() {
    let (code, out) = call(&["check", "--state", "gw:x=0.8,theta=0.2618", "--grid", "40"]);
    assert_eq!(code, 0, "{out}");
    let p: f64 = value(&out, "p_local").parse().unwrap();
    assert!((p - 0.7).abs() < 1e-4);
    let nl: f64 = value(&out, "min_remainder").parse().unwrap();
    assert!(nl >= -1e-9);
    let ratio: f64 = value(&out, "min_ratio").parse().unwrap();
    assert!(ratio >= p - 1e-6);
    assert_eq!(value(&out, "valid"), "true");
}

#[test]
fn check_separable_reports_local_error() {
    let (code, out) = call(&["check", "--state", "werner:x=0.2", "--grid", "30", "--refine", "1"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "p_local"), "1");
    let err: f64 = value(&out, "max_local_error").parse().unwrap();
    assert!(err < 1e-12);
}

#[test]
fn model_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    let (code, _) = call(&["model", "--state", "bd:x=0.1,y=0.1,a=0.1,b=0.2,gamma=0.5", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let doc: epr2::localmodels::ModelDocument =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(doc.model().is_ok());
    assert!(doc.p_local < 1.0);
}

#[test]
fn model_from_file_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.json");
    let rho = epr2::states::werner(0.8).unwrap();
    std::fs::write(&path, rho.to_json_string()).unwrap();
    let spec = format!("file:{}", path.display());
    let (code, out) = call(&["model", "--state", &spec]);
    assert_eq!(code, 0);
    let doc: epr2::localmodels::ModelDocument = serde_json::from_str(&out).unwrap();
    assert!((doc.p_local - 0.3).abs() < 1e-10);
}

#[test]
fn scatter_and_simulate_are_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&p1, &p2] {
        let (code, out) = call(&["scatter", "--n", "300", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(value(&out, "rows"), "300");
    }
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());

    let args = ["simulate", "--state", "werner:x=0.7", "--A", "0,0,1", "--B", "1,0,0", "--samples", "20000", "--seed", "3"];
    let (c1, o1) = call(&args);
    let (c2, o2) = call(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    assert_eq!(value(&o1, "samples"), "20000");
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["concurrence", "--state", "werner:x=1.5"]).0, 1);
    assert_eq!(call(&["concurrence", "--state", "nonsense"]).0, 1);
    assert_eq!(call(&["pq", "--state", "werner:x=0.5", "--A", "2,0,0", "--B", "0,0,1"]).0, 1);
    assert_eq!(call(&["frobnicate"]).0, 1);
    assert_eq!(call(&["concurrence", "--state", "file:/nonexistent/rho.json"]).0, 1);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_epr2"))
        .args(["concurrence", "--state", "gw:x=0.8,theta=0.2618"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let c: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((c - 0.3).abs() < 1e-4);

    let out = Command::new(env!("CARGO_BIN_EXE_epr2")).args(["check", "--state", "werner:x=2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}
