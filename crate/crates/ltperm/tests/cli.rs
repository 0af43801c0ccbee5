use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ltperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltperm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_lines(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn catalog_to(path: &Path, args: &[&str]) -> Output {
    let mut all = vec!["catalog"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    ltperm(&all)
}

#[test]
fn search_trace_finds_every_gamma() {
    let o = ltperm(&["search", "--p", "2", "--n", "4", "--k", "2", "--f", "trace"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&stdout(&o));
    assert_eq!(lines.len(), 15);
    assert!(stderr(&o).contains("translators=15"));
    for l in &lines {
        assert_eq!(l["k"], 2);
        assert_eq!(l["field"]["modulus"], serde_json::json!([1, 0, 0, 1, 1]));
    }
    assert_eq!(lines[0]["gamma"], 1);
    assert_eq!(lines[0]["b"], 0);
}

#[test]
fn search_monomial_finds_none() {
    let o = ltperm(&["search", "--p", "2", "--n", "4", "--k", "2", "--f", "monomial:5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("translators=0"));
}

#[test]
fn search_binomial_trace_form() {
    let o = ltperm(&["search", "--p", "3", "--n", "4", "--k", "2", "--f", "binomial:1:1:9"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&stdout(&o)).len(), 80);
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(ltperm(&["search", "--p", "4", "--n", "2", "--k", "1", "--f", "trace"]).status.code(), Some(2));
    assert_eq!(ltperm(&["search", "--n", "4", "--k", "2", "--f", "trace"]).status.code(), Some(2));
    assert_eq!(ltperm(&["search", "--p", "2", "--n", "4", "--k", "3", "--f", "trace"]).status.code(), Some(2));
    assert_eq!(ltperm(&["search", "--p", "2", "--n", "4", "--k", "2", "--f", "cubic"]).status.code(), Some(2));
    let o = ltperm(&["catalog", "--p", "2", "--n", "30", "--family", "special"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn special_catalog_over_gf64() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("special.jsonl");
    let o = catalog_to(&path, &["--p", "2", "--n", "6", "--family", "special", "--all-delta", "--all-s"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&fs::read_to_string(&path).unwrap());
    assert_eq!(lines.len(), 64 * 63);
    assert!(lines.iter().all(|l| l["predicted_permutation"] == l["oracle_results"]["is_permutation"]));
    let perms = lines.iter().filter(|l| l["oracle_results"]["is_permutation"] == true).count();
    assert_eq!(stdout(&o).trim(), format!("constructed=4032 verified_permutations={perms} mismatches=0"));
}

#[test]
fn trinomial_catalog_has_both_nu() {
    let o = ltperm(&["catalog", "--family", "trinomial-cpp", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&stdout(&o));
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l["oracle_results"]["is_permutation"] == true));
    assert!(stderr(&o).contains("constructed=2 verified_permutations=2 mismatches=0"));
}

#[test]
fn cr_spe_catalog_splits_on_rho() {
    let o = ltperm(&["catalog", "--p", "3", "--n", "4", "--family", "cr-spe"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&stdout(&o));
    assert_eq!(lines.len(), 8 * 9);
    for l in &lines {
        let id = l["recipe"]["id"].as_str().unwrap();
        let parts: Vec<u64> = id.split('-').skip(1).map(|x| x.parse().unwrap()).collect();
        let (rho, ell) = (parts[1], parts[2]);
        let perm = l["oracle_results"]["is_permutation"].as_bool().unwrap();
        if rho == 1 && ell % 2 == 1 {
            assert!(!perm, "{id}");
        }
        assert_eq!(l["predicted_permutation"], l["oracle_results"]["is_permutation"], "{id}");
    }
}

#[test]
fn verify_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("special.jsonl");
    let o = catalog_to(&path, &["--p", "2", "--n", "4", "--family", "special", "--all-delta", "--all-s"]);
    assert_eq!(o.status.code(), Some(0));

    let o = ltperm(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "checked=240 mismatches=0");

    let text = fs::read_to_string(&path).unwrap();
    let mut lines = json_lines(&text);
    let target = lines
        .iter()
        .position(|l| {
            l["oracle_results"]["is_permutation"] == false && l["recipe"]["s"].as_u64() != Some(1)
        })
        .unwrap();
    lines[target]["recipe"]["s"] = Value::from(1);
    let tampered = dir.path().join("tampered.jsonl");
    let body: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
    fs::write(&tampered, body.join("\n")).unwrap();
    let o = ltperm(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "checked=240 mismatches=1");
}

#[test]
fn verify_general_families_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["--p", "2", "--n", "6", "--k", "3", "--family", "translator", "--with-inverses"],
        &["--p", "2", "--n", "6", "--k", "2", "--family", "cr-quad"],
        &["--p", "3", "--n", "4", "--k", "1", "--family", "zero-translator"],
        &["--p", "3", "--n", "4", "--k", "2", "--family", "involution"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let path = dir.path().join(format!("run{i}.jsonl"));
        let o = catalog_to(&path, args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let o = ltperm(&["verify", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).contains("mismatches=0"));
    }
}

#[test]
fn verify_rejects_missing_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    fs::write(&path, r#"{"family":"special","sign":"minus","k":2,"delta":1,"s":3,"L":[1,0]}"#).unwrap();
    assert_eq!(ltperm(&["verify", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--p", "3", "--n", "4", "--k", "2", "--family", "translator", "--samples", "3", "--betas", "2"];
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    assert_eq!(catalog_to(&a, &args).status.code(), Some(0));
    assert_eq!(catalog_to(&b, &args).status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn csv_output_has_header() {
    let o = ltperm(&["catalog", "--p", "3", "--n", "2", "--family", "special", "--all-delta", "--all-s", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = text.lines();
    assert_eq!(
        rows.next().unwrap(),
        "id,family,p,n,k,params,is_permutation,is_involution,inverse_verified,predicted_permutation,table_sha256"
    );
    assert_eq!(rows.count(), 9 * 8);
}
