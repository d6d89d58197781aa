use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use twistor_core::{curvature, CurvatureTensor, SymplecticSpace};

fn twistor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistor")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn relations_lists_every_identity_and_flags_only_the_commutator() {
    let out = twistor(&["relations", "--l", "2", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["D"], 3);
    let identities = report["identities"].as_array().unwrap();
    assert_eq!(identities.len(), 5 * 9);
    for c in identities {
        let expected = if c["name"] == "[E+,E-] = H" && c["r"] != 2 { "fail" } else { "pass" };
        assert_eq!(c["status"], expected, "{c}");
    }
}

#[test]
fn symbol_check_at_l1_reports_vacuous_left_positions() {
    let out = twistor(&["symbol-check", "--l", "1", "--degree", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let positions = json(&out)["exactness"]["positions"].as_array().unwrap().clone();
    let left: Vec<&Value> = positions.iter().filter(|p| p["side"] == "left").collect();
    assert!(!left.is_empty());
    assert!(left.iter().all(|p| p["status"] == "vacuous"));
}

#[test]
fn symbol_check_accepts_explicit_xi_and_records_it() {
    let out = twistor(&["symbol-check", "--l", "2", "--degree", "1", "--xi", "0,0,1,0"]);
    let report = json(&out);
    assert_eq!(report["exactness"]["xi"]["spec"], "0,0,1,0");
    assert!(report["complex"]["composites"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn curvature_of_zero_tensor() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "zero.json", &CurvatureTensor::zero(2).to_json().to_string());
    let out = twistor(&["curvature", "--input", &path]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["ricci_type"], true);
    let weyl = CurvatureTensor::from_json(&report["weyl"]).unwrap();
    assert!(weyl.is_zero());
    let all_zero = report["ricci"]["entries"].as_array().unwrap().iter().flat_map(|row| row.as_array().unwrap()).all(|x| x["re"] == "0/1" && x["im"] == "0/1");
    assert!(all_zero);
}

#[test]
fn curvature_accepts_bare_nested_arrays() {
    let dir = tempfile::tempdir().unwrap();
    let tensor = CurvatureTensor::zero(1).to_json();
    let path = write(dir.path(), "bare.json", &tensor["entries"].to_string());
    assert_eq!(twistor(&["curvature", "--input", &path]).status.code(), Some(0));
}

#[test]
fn generated_curvature_is_ricci_type_and_reproducible() {
    let a = twistor(&["gen-curvature", "--l", "2", "--seed", "7"]);
    let b = twistor(&["gen-curvature", "--l", "2", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(Sha256::digest(&a.stdout), Sha256::digest(&b.stdout));
    let tensor = CurvatureTensor::from_json(&json(&a)).unwrap();
    let sp = SymplecticSpace::standard(2).unwrap();
    assert!(tensor.validate().is_ok());
    assert!(curvature::is_ricci_type(&sp, &tensor).unwrap());
    let c = twistor(&["gen-curvature", "--l", "2", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let to_stdout = twistor(&["decompose", "--l", "1", "--format", "text"]);
    let to_file = twistor(&["decompose", "--l", "1", "--format", "text", "--out", path.to_str().unwrap()]);
    assert_eq!(to_stdout.status.code(), Some(0));
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, to_stdout.stdout);
    assert!(String::from_utf8(written).unwrap().ends_with("result = pass\n"));
}

#[test]
fn passing_suites_exit_zero() {
    assert_eq!(twistor(&["project", "--l", "2"]).status.code(), Some(0));
    assert_eq!(twistor(&["decompose", "--l", "2", "--degree", "1"]).status.code(), Some(0));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write(dir.path(), "garbage.json", "{ not json");
    let asym = {
        let mut t = CurvatureTensor::zero(1).to_json();
        t["entries"][0][0][0][1] = serde_json::json!({"re": "1", "im": "0"});
        write(dir.path(), "asym.json", &t.to_string())
    };
    let cases: Vec<Vec<&str>> = vec![
        vec!["curvature", "--input", &garbage],
        vec!["curvature", "--input", &asym],
        vec!["curvature"],
        vec!["curvature", "--input", "/nonexistent/file.json"],
        vec!["symbol-check", "--xi", "1,2"],
        vec!["symbol-check", "--xi", "0,0,0,0"],
        vec!["symbol-check", "--xi", "a,b,c,d"],
        vec!["relations", "--l", "0"],
        vec!["relations", "--format", "yaml"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let out = twistor(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
