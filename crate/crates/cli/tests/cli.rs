use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const WITNESS_15_2: &str = r#"{"M":[[3,-8],[2,-5]],"mu":1,"beta":[0,0]}"#;
const IDENTITY_15_2: &str = r#"{"M":[[1,0],[0,1]],"mu":1,"beta":[0,0]}"#;

fn gsbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsbs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn analyze_reports_infinite_degree() {
    let out = gsbs(&["analyze", "15", "--cmax", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("degree is infinite"));

    let out = gsbs(&["--json", "analyze", "15", "--cmax", "2"]);
    let v = json(&out);
    assert_eq!(v["verdict"], "degree_infinite");
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 2);
    assert_eq!(certs[1]["det_M_minus_I"], 4);
    assert_eq!(certs[1]["reidemeister"]["count"], 12);
}

#[test]
fn analyze_refuses_prime_powers_and_bad_n() {
    let out = gsbs(&["analyze", "8"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("single prime"));
    assert_eq!(code(&gsbs(&["analyze", "1"])), 2);
    assert_eq!(code(&gsbs(&["analyze"])), 2);
}

#[test]
fn analyze_m_one_branch() {
    let v = json(&gsbs(&["--json", "analyze", "6", "--cmax", "2"]));
    assert_eq!(v["m"], 1);
    assert_eq!(v["free_abelian"], true);
}

#[test]
fn check_matrix_reports_each_congruence() {
    let out = gsbs(&["check-matrix", "15", "2", "[[0,1],[1,0]]"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("fails (M,c,1)"));

    let v = json(&gsbs(&["--json", "check-matrix", "15", "2", "[[3,-8],[2,-5]]"]));
    assert_eq!(v["extendable"], true);
    assert!(v["congruences"].as_array().unwrap().iter().all(|r| r["holds"] == true));

    let out = gsbs(&["check-matrix", "15", "2", "[[1,0],[0,1]]"]);
    assert!(stdout(&out).contains("extendable"));
}

#[test]
fn check_matrix_rejects_bad_input() {
    assert_eq!(code(&gsbs(&["check-matrix", "15", "2", "[[2,0],[0,1]]"])), 1);
    assert_eq!(code(&gsbs(&["check-matrix", "15", "2", "[[1,0,0],[0,1,0],[0,0,1]]"])), 2);
    assert_eq!(code(&gsbs(&["check-matrix", "15", "2", "[[1,0],[0"])), 2);
    assert_eq!(code(&gsbs(&["check-matrix", "15", "2", "/nonexistent/m.json"])), 2);
}

#[test]
fn reidemeister_exact_and_oracle() {
    let v = json(&gsbs(&["--json", "reidemeister", "15", "2", WITNESS_15_2]));
    assert_eq!(v["finite"], true);
    assert_eq!(v["count"], 12);
    assert!(v["count"].as_u64().unwrap() <= v["bound"].as_u64().unwrap());
    assert_eq!(v["bound"], 16);

    let v = json(&gsbs(&["--json", "reidemeister", "15", "2", IDENTITY_15_2]));
    assert_eq!(v["finite"], false);
    assert!(v.get("count").is_none());

    let v = json(&gsbs(&["--json", "reidemeister", "--oracle", "15", "2", WITNESS_15_2]));
    assert_eq!(v["oracle"]["stable"], true);
    assert_eq!(v["report"]["count"], 12);
    assert_eq!(v["report"]["method"], "oracle");
}

#[test]
fn reidemeister_rejects_invalid_automorphism() {
    let swap = r#"{"M":[[0,1],[1,0]],"mu":1,"beta":[0,0]}"#;
    let out = gsbs(&["reidemeister", "15", "2", swap]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("(M,c,1)"));
}

#[test]
fn reidemeister_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.json");
    fs::write(&path, WITNESS_15_2).unwrap();
    let v = json(&gsbs(&["--json", "reidemeister", "15", "2", path.to_str().unwrap()]));
    assert_eq!(v["count"], 12);
}

#[test]
fn resource_cap_exits_three() {
    let out = gsbs(&["--cap", "10", "reidemeister", "15", "2", WITNESS_15_2]);
    assert_eq!(code(&out), 3);
}

#[test]
fn lcs_table() {
    let v = json(&gsbs(&["--json", "lcs", "15", "3"]));
    let exps: Vec<u64> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["exponent"].as_u64().unwrap())
        .collect();
    assert_eq!(exps, [2, 4, 0]);
}

#[test]
fn mul_normalizes_theta() {
    let out = gsbs(&["--json", "mul", "15", "2", r#"{"y":[1,0],"theta":-1}"#, r#"{"y":[0,1],"theta":3}"#]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v, serde_json::json!({"y": [1, 1], "theta": 2}));
}

#[test]
fn json_output_round_trips() {
    let out = gsbs(&["--json", "reidemeister", "15", "2", WITNESS_15_2]);
    let text = stdout(&out);
    let report: gsbs_core::ReidemeisterReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);

    let out = gsbs(&["--json", "analyze", "15", "--cmax", "3"]);
    let text = stdout(&out);
    let report: gsbs_core::DegreeReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);
}

#[test]
fn corpus_regen_run_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.json");
    let file = path.to_str().unwrap();
    fs::write(
        &path,
        gsbs_core::corpus::regen(&[(15, 2), (6, 1)], &Default::default())
            .unwrap()
            .to_json(),
    )
    .unwrap();

    // Regeneration keeps the existing case list and is deterministic.
    let before = fs::read_to_string(&path).unwrap();
    assert_eq!(code(&gsbs(&["corpus", "--regen", "--file", file])), 0);
    assert_eq!(fs::read_to_string(&path).unwrap(), before);

    let out = gsbs(&["corpus", "--run", "--file", file]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("2 passed, 0 failed"));

    fs::write(&path, before.replacen("\"n\": 15", "\"n\": \"x\"", 1)).unwrap();
    assert_eq!(code(&gsbs(&["corpus", "--run", "--file", file])), 2);

    let tampered = before.replacen("\"value\": 2", "\"value\": 3", 1);
    assert_ne!(tampered, before);
    fs::write(&path, tampered).unwrap();
    assert_eq!(code(&gsbs(&["corpus", "--run", "--file", file])), 1);

    assert_eq!(code(&gsbs(&["corpus", "--run", "--file", "/nonexistent/c.json"])), 2);
}

#[test]
fn shipped_corpus_passes() {
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/corpus.json");
    let out = gsbs(&["corpus", "--run", "--file", file]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}
