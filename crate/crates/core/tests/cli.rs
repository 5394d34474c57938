use std::fs;
use std::path::Path;

use lagrangian_lab::cli::run;

fn lagrangian(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("lagrangian").chain(args.iter().copied());
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn compute_prints_value_first() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write(dir.path(), "k5.txt", "5\n1 2\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n3 4\n3 5\n4 5\n");
    let (code, out) = lagrangian(&["compute", &k5]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("0.400000000000"));

    let (code, out) = lagrangian(&["compute", &k5, "--json", "--grid", "--grid-d", "10"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.4).abs() < 1e-9);
    assert_eq!(v["hash"].as_str().unwrap().len(), 64);
    assert!(v["grid"]["points"].as_u64().unwrap() > 0);
}

#[test]
fn compute_lambda_prime_and_weighted() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "k3.json", r#"{"n":3,"edges":[[1],[2],[3],[1,2],[1,3],[2,3]]}"#);
    let (code, out) = lagrangian(&["compute", &h, "--objective", "lambda-prime"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1.666666666667");

    let (code, out) = lagrangian(&["compute", &h, "--objective", "weighted", "--coeffs", r#"{"r0":1,"alpha":{"2":2.0}}"#]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1.666666666667");

    let (code, _) = lagrangian(&["compute", &h, "--objective", "weighted"]);
    assert_eq!(code, 1);
}

#[test]
fn clique_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "g.txt", "4\n1 2\n2 3\n1 3\n3 4\n");
    let (code, out) = lagrangian(&["clique", &h, "--types", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"], 3);
    assert_eq!(v["vertices"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["is_unique_max"], true);
}

#[test]
fn compress_modes() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "g.txt", "4\n2 3\n3 4\n");
    assert_eq!(lagrangian(&["compress", &h, "--check"]), (0, "false\n".into()));

    let (code, out) = lagrangian(&["compress", &h, "--pair", "1,3"]);
    assert_eq!(code, 0);
    assert!(out.contains("[1,2]") && out.contains("[1,4]"), "{out}");

    let fixed = dir.path().join("fixed.json");
    let (code, _) = lagrangian(&["compress", &h, "--fixpoint", "-o", fixed.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(lagrangian(&["compress", fixed.to_str().unwrap(), "--check"]).0, 0);
    assert_eq!(lagrangian(&["compress", fixed.to_str().unwrap(), "--check"]).1, "true\n");

    assert_eq!(lagrangian(&["compress", &h, "--pair", "3,1"]).0, 1);
    assert_eq!(lagrangian(&["compress", &h]).0, 1);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.txt", "4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n");
    let (code, out) = lagrangian(&["verify", "--theorem", "TWO_R_T6a", "--input", &k4, "--params", r#"{"r":3}"#]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("closed_form 0.437500000000"));

    let (code, out) = lagrangian(&["verify", "--theorem", "two-r-t6a", "--input", &k4, "--params", r#"{"r":3,"t":5}"#, "--json"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "not_applicable");

    assert_eq!(lagrangian(&["verify", "--theorem", "NOPE", "--input", &k4]).0, 1);
    assert_eq!(lagrangian(&["verify", "--theorem", "MS_T1", "--input", "/no/such/file"]).0, 1);
}

#[test]
fn generate_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("t6a.json");
    let out_str = out_path.to_str().unwrap();
    let params = r#"{"t":4,"r":3}"#;
    assert_eq!(lagrangian(&["generate", "--family", "t6a", "--params", params, "--seed", "3", "-o", out_str]).0, 0);
    let first = fs::read_to_string(&out_path).unwrap();
    let (_, again) = lagrangian(&["generate", "--family", "t6a", "--params", params, "--seed", "3"]);
    assert_eq!(first, again);
    let (code, _) = lagrangian(&["verify", "--theorem", "TWO_R_T6a", "--input", out_str, "--params", params]);
    assert_eq!(code, 0);
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let (code, _) = lagrangian(&[
        "sweep", "--family", "t6a", "--params", r#"{"t":4,"r":3}"#, "--seeds", "1..3", "--out", csv.to_str().unwrap(), "--jobs", "2",
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("family,seed,theorem,t,r,m"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.starts_with("t6a,") && r.contains(",TWO_R_T6a,") && r.contains(",true,")));
}

#[test]
fn usage_errors() {
    assert_eq!(lagrangian(&[]).0, 1);
    assert_eq!(lagrangian(&["compute"]).0, 1);
    assert_eq!(lagrangian(&["sweep", "--family", "t6a", "--seeds", "9..2"]).0, 1);
    let (code, out) = lagrangian(&["--version"]);
    assert_eq!(code, 0);
    assert!(out.contains("lagrangian"));
}
