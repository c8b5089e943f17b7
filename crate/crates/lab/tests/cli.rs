use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nodal_lab::pgm;
use nodal_lab::scaling::rows_from_csv;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_nodal-lab");

const UNEQUAL_PAIR: &str = r#"{"terms":[
  {"a":1.0,"kx":1.0,"ky":0.0,"theta":0.0},
  {"a":1.05,"kx":0.0,"ky":1.0,"theta":0.0}
]}"#;

fn lab(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_rejects_two_terms() {
    let dir = TempDir::new().unwrap();
    let e = write(dir.path(), "pair.json", UNEQUAL_PAIR);
    let o = lab(&["check", "--ensemble", &e]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("support 4 < 6"), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["support_count"], 4);
    assert_eq!(report["passed"], false);
}

#[test]
fn census_on_unequal_cosines_has_no_compact_domain() {
    let dir = TempDir::new().unwrap();
    let e = write(dir.path(), "pair.json", UNEQUAL_PAIR);
    let o = lab(&[
        "census",
        "--ensemble",
        &e,
        "--radius",
        "10",
        "--step",
        "0.05",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let c: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(c["plain_count"], 0);
    assert_eq!(c["certified_count"], 0);
}

#[test]
fn census_default_step_follows_margin() {
    let dir = TempDir::new().unwrap();
    let e = write(dir.path(), "pair.json", UNEQUAL_PAIR);
    let o = lab(&["census", "--ensemble", &e, "--radius", "2", "--eps", "0.2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let c: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let step = c["step"].as_f64().unwrap();
    assert!((step - 0.2 / (4.0 * 2.05)).abs() < 1e-15, "{step}");
}

#[test]
fn scaling_csv_has_the_fixed_header_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let e = write(dir.path(), "pair.json", UNEQUAL_PAIR);
    let out = dir.path().join("s.csv");
    let o = lab(&[
        "scaling",
        "--ensemble",
        &e,
        "--radii",
        "2,4",
        "--step",
        "0.05",
        "--unchecked",
        "--no-timing",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("r,plain,certified,seconds\n"), "{text}");
    assert!(text.ends_with('\n'));
    let rows = rows_from_csv(&text).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].r, 2.0);
    assert!(rows.iter().all(|r| r.certified == 0 && r.seconds == 0.0));
}

#[test]
fn scaling_stops_on_failed_hypotheses() {
    let dir = TempDir::new().unwrap();
    let e = write(dir.path(), "pair.json", UNEQUAL_PAIR);
    let o = lab(&["scaling", "--ensemble", &e, "--radii", "2,4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
}

#[test]
fn render_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let e = write(dir.path(), "pair.json", UNEQUAL_PAIR);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = lab(&[
            "render",
            "--ensemble",
            &e,
            "--radius",
            "3",
            "--step",
            "0.1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(out).unwrap()
    };
    let a = run("a.pgm");
    assert_eq!(a, run("b.pgm"));
    let (w, h, px) = pgm::decode(&a).unwrap();
    assert_eq!(w, h);
    assert!(px.contains(&160) && px.contains(&255) && px.contains(&0));
}

#[test]
fn lemma3_writes_a_loadable_ensemble() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("l3.json");
    let o = lab(&[
        "lemma3",
        "--epsilon",
        "0.01",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("SameSign"));
    let e = nodal_lab::ensemble::read_ensemble(&out).unwrap();
    let a = e.amplitudes();
    assert_eq!(a.len(), 3);
    assert!((a[1] - 0.995).abs() < 1e-12);
    assert!((a[2] - 0.019010).abs() < 1e-6);
}

#[test]
fn eval_prints_value_and_gradient() {
    let dir = TempDir::new().unwrap();
    let e = write(dir.path(), "pair.json", UNEQUAL_PAIR);
    let o = lab(&["eval", "--ensemble", &e, "--x", "0", "--y", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("f = 2.05\n"), "{}", stdout(&o));
}

#[test]
fn domain_and_usage_errors_have_distinct_codes() {
    let dir = TempDir::new().unwrap();
    let e = write(dir.path(), "pair.json", UNEQUAL_PAIR);
    assert_eq!(
        lab(&["census", "--ensemble", &e, "--step=-1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        lab(&["census", "--ensemble", "/nonexistent/e.json"])
            .status
            .code(),
        Some(1)
    );
    let bad = write(dir.path(), "bad.json", r#"{"terms":[{"a":1}]}"#);
    assert_eq!(lab(&["check", "--ensemble", &bad]).status.code(), Some(1));
    let o = lab(&["census", "--radius", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(lab(&[]).status.code(), Some(2));
}
