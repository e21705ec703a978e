use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn openfol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_openfol"))
        .args(args)
        .current_dir(repo())
        .env_remove("OPENFOL_CORPUS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn check_godzilla_in_each_mode() {
    let o = openfol(&["check", "corpus/cg.lfd", "--mode", "classical"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("sequent: ⊢ exists x (x = godzilla)"));

    let o = openfol(&["check", "corpus/cg.lfd", "--mode", "open", "--output", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["accepted"], false);
    assert_eq!(v["mode"], "open");
    assert!(v["lines"][0]["error"].as_str().unwrap().starts_with("RuleUnavailableInMode"));
    assert!(v.get("sequent").is_none());
    assert_eq!(v["uses_identity_intro"], true);

    assert_eq!(code(&openfol(&["check", "missing.lfd"])), 2);
}

#[test]
fn check_json_schema() {
    let o = openfol(&["--output", "json", "check", "corpus/cg-ga.lfd"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["accepted", "config", "file", "lines", "mode", "sequent", "uses_global_assumption", "uses_identity_intro"]
    );
    assert_eq!(v["sequent"]["global_identity"], true);
    assert_eq!(v["sequent"]["premises"], serde_json::json!([]));
    assert_eq!(v["uses_global_assumption"], true);
    assert_eq!(v["lines"].as_array().unwrap().len(), 3);
    assert_eq!(v["config"]["mode"], "open");
}

#[test]
fn flag_beats_pragma_beats_default() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cg.lfd");
    let text = std::fs::read_to_string(repo().join("corpus/cg.lfd")).unwrap();
    std::fs::write(&path, format!("pragma mode: classical\n{text}")).unwrap();
    let p = path.to_str().unwrap();

    let o = openfol(&["--output", "json", "check", p]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["config"]["mode"], "classical");
    let o = openfol(&["--output", "json", "check", p, "--mode", "minimal"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["mode"], "minimal");
}

#[test]
fn unparsable_script_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.lfd");
    std::fs::write(&path, "- (1) a = = a A\n").unwrap();
    let o = openfol(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.lfd"));
}

#[test]
fn search_examples() {
    let o = openfol(&["search", "--conclude", "a = a", "--profile", "total", "--max-size", "1", "--output", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["status"], "COUNTERMODEL");
    assert_eq!(
        v["model"].to_string(),
        r#"{"domain_size":1,"identity":[],"names":{"a":0},"predicates":{}}"#
    );

    let o = openfol(&["search", "--premise", "a = b", "--premise", "P(a)", "--conclude", "P(b)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("VALID_UP_TO_BOUND"));
    assert_eq!(code(&openfol(&["search", "--conclude", "(a = a) | ~(a = a)"])), 0);
    assert_eq!(code(&openfol(&["search", "--conclude", "(a = a) | ~(a = a)", "--max-models", "1"])), 3);
    // Outside any quantifier `x` is a name, so this is a closed sentence.
    assert_eq!(code(&openfol(&["search", "--conclude", "F(x)"])), 1);
    assert_eq!(code(&openfol(&["search", "--conclude", "F(a)", "--profile", "modal"])), 2);
    assert_eq!(code(&openfol(&["search", "--conclude", "a = "])), 2);
    assert_eq!(code(&openfol(&["search"])), 2);
}

#[test]
fn audit_examples() {
    let o = openfol(&["audit", "--rule", "EI", "--profile", "partial", "--output", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let report = &v["reports"][0];
    assert_eq!(report["status"], "COUNTEREXAMPLE");
    assert_eq!(report["rule"], "EI");
    assert_eq!(v["config"]["max_size"], 2);
    assert_eq!(code(&openfol(&["audit", "--rule", "FOO"])), 2);
    assert_eq!(code(&openfol(&["audit", "--rule", "MPP", "--max-size", "1"])), 0);
    assert_eq!(code(&openfol(&["audit", "--rule", "MP", "--all"])), 2);
}

#[test]
fn corpus_runs_and_gates_missing_entries() {
    let o = openfol(&["corpus"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    for id in openfol::corpus::MANDATORY_IDS {
        assert!(text.lines().any(|l| l.starts_with(&format!("{id} "))), "{id}");
    }

    // A copy of the corpus without APP7.
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(repo().join("corpus")).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let manifest = std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    let start = manifest.find("id = APP7").unwrap();
    let end = start + manifest[start..].find("id = APP8").unwrap();
    let cut = format!("{}{}", &manifest[..start], &manifest[end..]);
    std::fs::write(dir.path().join("manifest.txt"), cut).unwrap();

    let o = Command::new(env!("CARGO_BIN_EXE_openfol"))
        .arg("corpus")
        .env("OPENFOL_CORPUS", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("MissingEntry") && err.contains("APP7"), "{err}");

    // A wrong expectation is a failure, not an error.
    let flipped = manifest.replacen("expect.open = rejected@1", "expect.open = theorem", 1);
    std::fs::write(dir.path().join("manifest.txt"), flipped).unwrap();
    let o = openfol(&["corpus", "--manifest", dir.path().to_str().unwrap(), "--output", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let failed: Vec<&Value> = v["rows"].as_array().unwrap().iter().filter(|r| r["pass"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["id"], "CG");
    assert_eq!(failed[0]["check"], "open");
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--output", "json", "search", "--conclude", "exists x (x = godzilla)"];
    assert_eq!(openfol(&args).stdout, openfol(&args).stdout);
}
