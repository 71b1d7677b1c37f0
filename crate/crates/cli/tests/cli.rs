use std::fs;
use std::path::Path;
use std::process::Command as Process;

use lemlab::{read_report, replay, run, CliError, Command, RunConfig, REPORT_FILE};
use lemlab_core::Verdict;
use serde_json::{json, Value};

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_lemlab"))
}

fn two_roots() -> Value {
    json!({"factors": [{"root": [1.0, 0.0], "multiplicity": 1}, {"root": [-1.0, 0.0], "multiplicity": 1}]})
}

fn mass_one_measure() -> Value {
    json!({"kind": "measure", "measure": {"dimension": 1, "atoms": [
        {"location": [[0.3, 0.1]], "weight": 0.25}, {"location": [[-1.0, 2.0]], "weight": 0.75}]}})
}

fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/run_report.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn cartan_example_passes_with_two_discs() {
    let mut cfg = RunConfig::new(Command::Cartan, 1).with_input_doc(two_roots());
    cfg.params.eps = Some(0.1);
    let r = run(&cfg).unwrap();
    assert_eq!(r.payload.verdict, Verdict::Pass);
    assert_eq!(r.payload.counts["discs"], 2);
    assert!(r.payload.constants["sum_radii"] <= 2.0 * std::f64::consts::E * 0.1);
    assert_eq!(r.payload.seed, Some(1));
}

#[test]
fn thm42_example_passes() {
    let mut cfg = RunConfig::new(Command::Thm42, 3).with_input_doc(mass_one_measure());
    cfg.params.eta = Some(1.0);
    cfg.params.alpha = Some(1.0);
    assert_eq!(run(&cfg).unwrap().payload.verdict, Verdict::Pass);
}

#[test]
fn missing_parameter_is_named() {
    let cfg = RunConfig::new(Command::Cartan, 1).with_input_doc(two_roots());
    let e = run(&cfg).unwrap_err();
    assert!(matches!(e, CliError::MissingParam { what: "--eps", .. }), "{e}");
}

#[test]
fn domain_violation_names_the_precondition() {
    let mut cfg = RunConfig::new(Command::Constants, 1);
    cfg.params.eta = Some(1.5);
    let e = run(&cfg).unwrap_err().to_string();
    assert!(e.contains("eta"), "{e}");
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.json");
    fs::write(&input, two_roots().to_string()).unwrap();
    let ok = bin().args(["cartan", "--eps", "0.1", "--seed", "4", "--input"]).arg(&input).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let no_seed = bin().args(["cartan", "--eps", "0.1", "--input"]).arg(&input).output().unwrap();
    assert_eq!(no_seed.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&no_seed.stderr).contains("seed"));
    let unknown = bin().args(["no-such-command", "--seed", "1"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(1));
    let bad_domain = bin().args(["constants", "--eta", "2", "--seed", "1"]).output().unwrap();
    assert_eq!(bad_domain.status.code(), Some(1));
}

#[test]
fn violated_bound_exits_with_two() {
    // The unit-ball mass term cannot be dropped: with c_n near zero the lower bound is violated.
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.json");
    let doc = json!({"dimension": 1, "atoms": [{"location": [[0.2, 0.3]], "weight": 1.0},
                                               {"location": [[-0.5, 0.1]], "weight": 0.5}]});
    fs::write(&input, doc.to_string()).unwrap();
    let base = ["lemma51", "--eta", "0.3", "--seed", "1", "--input"];
    let honest = bin().args(base).arg(&input).output().unwrap();
    assert_eq!(honest.status.code(), Some(0));
    let out = bin().args(base).arg(&input).args(["--c-n", "1e-9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn artifacts_and_schema() {
    let dir = tempfile::tempdir().unwrap();
    let v = validator();
    let mut cfg = RunConfig::new(Command::Cartan, 9).with_input_doc(two_roots());
    cfg.params.eps = Some(0.2);
    cfg.out = Some(dir.path().join("cartan"));
    let r = run(&cfg).unwrap();
    assert_eq!(r.artifacts, vec![REPORT_FILE, "lemniscate.csv", "cover.svg"]);
    let csv = fs::read_to_string(dir.path().join("cartan/lemniscate.csv")).unwrap();
    assert!(csv.starts_with("x,y,value,in_exceptional\n"));
    assert!(csv.lines().skip(1).any(|l| l.ends_with(",1")));
    let svg = fs::read_to_string(dir.path().join("cartan/cover.svg")).unwrap();
    assert_eq!(svg.matches("stroke=\"steelblue\"").count(), 2);
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("cartan").join(REPORT_FILE)).unwrap()).unwrap();
    assert_valid(&v, &doc);

    let mut cfg = RunConfig::new(Command::Lemma51, 2)
        .with_input_doc(json!({"dimension": 1, "atoms": [{"location": [[0.2, 0.3]], "weight": 0.6}]}));
    cfg.params.eta = Some(0.1);
    cfg.out = Some(dir.path().join("lemma"));
    run(&cfg).unwrap();
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("lemma").join(REPORT_FILE)).unwrap()).unwrap();
    assert_valid(&v, &doc);
    assert!(fs::read_to_string(dir.path().join("lemma/cover.svg")).unwrap().contains("stroke-dasharray"));
}

#[test]
fn same_config_gives_identical_payloads() {
    let mut cfg = RunConfig::new(Command::Cor43, 11).with_input_doc(mass_one_measure());
    cfg.params.eps = Some(0.05);
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    assert_eq!(lemlab::payload_bytes(&a).unwrap(), lemlab::payload_bytes(&b).unwrap());
}

fn stored_run(dir: &Path) -> std::path::PathBuf {
    let mut cfg = RunConfig::new(Command::Thm42, 5).with_input_doc(mass_one_measure());
    cfg.params.eta = Some(0.5);
    cfg.out = Some(dir.to_path_buf());
    run(&cfg).unwrap();
    dir.join(REPORT_FILE)
}

#[test]
fn replay_reproduces_the_payload() {
    let dir = tempfile::tempdir().unwrap();
    let path = stored_run(dir.path());
    let again = replay(&path).unwrap();
    assert_eq!(read_report(&path).unwrap().payload, again.payload);
}

#[test]
fn tampered_seed_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let path = stored_run(dir.path());
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["config"]["seed"] = json!(6);
    fs::write(&path, doc.to_string()).unwrap();
    assert!(matches!(replay(&path), Err(CliError::ReplayMismatch { .. })));
}

#[test]
fn schema_bump_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = stored_run(dir.path());
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["schema_version"] = json!(2);
    fs::write(&path, doc.to_string()).unwrap();
    assert!(matches!(replay(&path), Err(CliError::SchemaMismatch { found: 2, expected: 1 })));
    let out = bin().arg("replay").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema version 2"));
}

#[test]
fn input_file_is_embedded() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("set.json");
    fs::write(&input, json!({"kind": "segment", "a": [-2.0, 0.0], "b": [2.0, 0.0]}).to_string()).unwrap();
    let mut cfg = RunConfig::new(Command::Capacity, 1);
    cfg.input = Some(input.clone());
    cfg.out = Some(dir.path().join("out"));
    let r = run(&cfg).unwrap();
    assert_eq!(r.payload.constants["capacity"], 1.0);
    fs::remove_file(&input).unwrap();
    replay(&dir.path().join("out").join(REPORT_FILE)).unwrap();
}

#[test]
fn wrong_input_kind_is_an_error() {
    let cfg = RunConfig::new(Command::Capacity, 1).with_input_doc(two_roots());
    assert!(matches!(run(&cfg), Err(CliError::Input(_))));
}
