//! End-to-end tests of the `fermat` binary: exit-code contract, report
//! content, JSON mode, determinism, and the tolerance override.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

fn fermat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermat"))
        .args(args)
        .env_remove("FERMAT_EP_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_problem(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    let mut file = std::fs::File::create(&path).unwrap();
    file.write_all(body.as_bytes()).unwrap();
    path
}

#[test]
fn classify_reports_case_and_minors() {
    let out = fermat(&["classify", corpus("second_derivative_c2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("classification: T1/C2"), "{text}");
    assert!(text.contains("A2 = -2"), "{text}");
    assert!(text.contains("A3 = 0"), "{text}");
}

#[test]
fn classify_exits_2_on_hypothesis_violation() {
    let out = fermat(&[
        "classify",
        corpus("q_cube_root_counterexample.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("q^3 = 1"));
}

#[test]
fn verify_solves_and_fails() {
    let out = fermat(&["verify", corpus("mixed_difference_c3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: solves"));

    // A perturbation off the operators' joint kernel must break the
    // identity. (Adding a multiple of e^z would not: it is the free
    // homogeneous direction of this case and still solves.)
    let dir = tempfile::tempdir().unwrap();
    let perturbed = std::fs::read_to_string(corpus("mixed_difference_c3.json"))
        .unwrap()
        .replace("z*e^(z)", "z*e^(z) + 0.01*z");
    let path = write_problem(dir.path(), "perturbed.json", &perturbed);
    let out = fermat(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: fails"));

    // the kernel direction stays a solution
    let kernel = std::fs::read_to_string(corpus("mixed_difference_c3.json"))
        .unwrap()
        .replace("z*e^(z)", "z*e^(z) + 0.01*e^(z)");
    let path = write_problem(dir.path(), "kernel.json", &kernel);
    let out = fermat(&["verify", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("verdict: solves"));
}

#[test]
fn verify_without_f_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{
        "a": ["1", "0", "0"], "b": ["0", "0", "1"],
        "omega": "2", "mode": "shift", "param": "1", "g": "z"
    }"#;
    let path = write_problem(dir.path(), "no_f.json", body);
    let out = fermat(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"f\""));
}

#[test]
fn construct_outside_families_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{
        "a": ["1", "0", "1"], "b": ["1", "0", "-1"],
        "omega": "2", "mode": "qscale", "param": "3", "g": "z^2"
    }"#;
    let path = write_problem(dir.path(), "t2_quadratic_g.json", body);
    let out = fermat(&["construct", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("linear exponent"), "{err}");
}

#[test]
fn construct_emits_candidate_and_conditions() {
    let out = fermat(&["construct", corpus("gaussian_c4.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("family candidate: (-0.2886751345948129)*exp(-2*z + z^2)"), "{text}");
    assert!(text.contains("verdict: solves"), "{text}");
    assert!(text.contains("condition [ok]"), "{text}");
}

#[test]
fn construct_rejects_unavailable_branch() {
    let out = fermat(&[
        "construct",
        corpus("periodic_shift_c1.json").to_str().unwrap(),
        "--branch",
        "viaA1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("branch unavailable"));
}

#[test]
fn corpus_passes_and_flags_the_expected_violation() {
    let out = fermat(&["corpus"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("total: 7/7 pass"), "{text}");
    assert!(text.contains("expected hypothesis violation: q^3 = 1"), "{text}");
}

#[test]
fn corpus_json_is_machine_readable() {
    let out = fermat(&["corpus", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["pass"] == serde_json::json!(true)));
}

#[test]
fn verify_json_reports_the_verdict() {
    let out = fermat(&[
        "verify",
        corpus("q_identity_c1.json").to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verdict"], serde_json::json!("solves"));
    assert_eq!(report["classification"], serde_json::json!("T2/C1"));
}

#[test]
fn reports_are_deterministic() {
    let path = corpus("gaussian_c4.json");
    let a = fermat(&["construct", path.to_str().unwrap()]);
    let b = fermat(&["construct", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let a = fermat(&["corpus", "--json"]);
    let b = fermat(&["corpus", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_file_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(dir.path(), "broken.json", "{ not json");
    let out = fermat(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tolerance_env_is_honored() {
    // a loose tolerance lets the perturbed candidate pass; the default must
    // reject it (documented floor for the corpus is 1e-10)
    let dir = tempfile::tempdir().unwrap();
    let perturbed = std::fs::read_to_string(corpus("mixed_difference_c3.json"))
        .unwrap()
        .replace("z*e^(z)", "z*e^(z) + 0.0000001*z");
    let path = write_problem(dir.path(), "tiny_perturbation.json", &perturbed);

    let strict = fermat(&["verify", path.to_str().unwrap()]);
    assert!(stdout(&strict).contains("verdict: fails"));

    let loose = Command::new(env!("CARGO_BIN_EXE_fermat"))
        .args(["verify", path.to_str().unwrap()])
        .env("FERMAT_EP_TOL", "1e-3")
        .output()
        .unwrap();
    assert!(stdout(&loose).contains("verdict: solves"));

    let invalid = Command::new(env!("CARGO_BIN_EXE_fermat"))
        .args(["corpus"])
        .env("FERMAT_EP_TOL", "banana")
        .output()
        .unwrap();
    assert_eq!(invalid.status.code(), Some(1));
}
