use std::fs;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn voaplus(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_voaplus"))
        .env_remove("VOAPLUS_RANK_BOUND")
        .args(args)
        .output()
        .expect("failed to spawn binary")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = voaplus(&full);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn code(args: &[&str]) -> i32 {
    voaplus(args).status.code().expect("exit code")
}

/// Compares text output with a file under tests/golden. Set
/// `VOAPLUS_UPDATE_GOLDEN=1` to rewrite the files.
fn assert_golden(name: &str, args: &[&str]) {
    let out = voaplus(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = root().join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("VOAPLUS_UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, &out.stdout).unwrap();
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected, "golden {name}");
}

#[test]
fn golden_analyze_two_a1() {
    assert_golden("analyze_2A1", &["analyze", "2A1"]);
}

#[test]
fn golden_shortvec_a2() {
    assert_golden("shortvec_A2_norm2", &["shortvec", "A2", "--norm", "2"]);
}

#[test]
fn golden_odd_z1() {
    assert_golden("odd_Z1", &["odd", "Z1"]);
}

#[test]
fn golden_rl_diag44() {
    assert_golden("rl_sqrt2_A1A1", &["rl", "sqrt2*(A1+A1)"]);
}

#[test]
fn analyze_two_a1_json() {
    let v = json(&["analyze", "2A1"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["q_size"], 3);
    assert_eq!(v["result"]["aut_order"], 6);
    assert_eq!(v["result"]["h_order"], 2);
}

#[test]
fn rl_of_e8_is_empty() {
    let v = json(&["rl", "E8"]);
    assert_eq!(v["result"]["cosets"], serde_json::json!([]));
}

#[test]
fn shortvec_counts() {
    assert_eq!(json(&["shortvec", "A2", "--norm", "2"])["result"]["count"], 6);
    let v = json(&["shortvec", "A2", "--norm", "2/3", "--coset", "1/3,2/3"]);
    assert_eq!(v["result"]["count"], 3);
    let v = json(&["shortvec", "E8", "--norm", "4"]);
    assert_eq!(v["result"]["count"], 2160);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["analyze", "A2"]), 0);
    assert_eq!(code(&["analyze", "A2 +"]), 2);
    assert_eq!(code(&["analyze", "Q9"]), 2);
    assert_eq!(code(&["analyze", "gram(1,2;2,1)"]), 2);
    assert_eq!(code(&["analyze", "hamming8"]), 2);
    assert_eq!(code(&["analyze", "Z1"]), 3);
    assert_eq!(code(&["odd", "A2"]), 3);
    assert_eq!(code(&["shortvec", "A2", "--norm", "-2"]), 3);
    assert_eq!(code(&["shortvec", "A2", "--norm", "2", "--coset", "1/2,0"]), 3);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["selftest", "--inject-fault", "nonsense"]), 2);
}

#[test]
fn selftest_passes_and_detects_faults() {
    assert_eq!(code(&["selftest"]), 0);
    assert_eq!(code(&["selftest", "--inject-fault", "r-count"]), 4);
}

#[test]
fn injected_faults_are_internal_errors() {
    let run = |f: &str| voaplus::cli::run(["voaplus", "selftest", "--inject-fault", f]).code;
    assert_eq!(run("q-size"), 4);
    assert_eq!(run("twisted-sign"), 4);
}

#[test]
fn rank_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_voaplus"))
        .env("VOAPLUS_RANK_BOUND", "0")
        .args(["analyze", "2A1", "--format", "json"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["h_order"], Value::Null);
    assert_eq!(v["result"]["h_order_absent"], "rank_bound");
    assert_eq!(v["result"]["q_size"], 3);

    let out = Command::new(env!("CARGO_BIN_EXE_voaplus"))
        .env("VOAPLUS_RANK_BOUND", "many")
        .args(["analyze", "2A1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn batch_keeps_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("batch.txt");
    fs::write(&file, "# small cases\nsqrt2*A3\n2A1\n\nA2\n").unwrap();
    let v = json(&["analyze", "--batch", file.to_str().unwrap()]);
    let items = v["result"].as_array().unwrap();
    let inputs: Vec<&str> = items.iter().map(|i| i["input"].as_str().unwrap()).collect();
    assert_eq!(inputs, ["sqrt2*A3", "2A1", "A2"]);
    assert_eq!(items[0]["report"]["aut_order"], 576);
    assert_eq!(items[1]["report"]["aut_order"], 6);

    fs::write(&file, "2A1\nZ1\n").unwrap();
    let out = voaplus(&["analyze", "--batch", file.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["result"][1]["error"].as_str().unwrap().contains("not even"));
}

#[test]
fn lattice_and_code_files() {
    let dir = tempfile::tempdir().unwrap();
    let l = dir.path().join("l.toml");
    fs::write(&l, "name = \"2A1\"\ngram = [[8]]\n").unwrap();
    assert_eq!(json(&["analyze", l.to_str().unwrap()])["result"]["aut_order"], 6);
    let c = dir.path().join("c.json");
    fs::write(&c, r#"{"length": 8, "generators": ["11110000"]}"#).unwrap();
    assert_eq!(code(&["analyze", c.to_str().unwrap()]), 2);
}

/// Tokens that carry a digit, in order of appearance.
fn numeric_tokens(s: &str) -> Vec<String> {
    let mut out: Vec<String> = s
        .split(|c: char| !(c.is_ascii_alphanumeric() || c == '/' || c == '-' || c == '_'))
        .filter(|t| t.chars().any(|c| c.is_ascii_digit()))
        .map(String::from)
        .collect();
    out.sort();
    out
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    for args in [
        vec!["analyze", "2A1"],
        vec!["analyze", "B(zero(4))"],
        vec!["orbit", "E8"],
        vec!["decompose", "sqrt2*(A1+A1)"],
        vec!["odd", "Z2"],
        vec!["shortvec", "D4", "--norm", "2"],
    ] {
        let text = String::from_utf8(voaplus(&args).stdout).unwrap();
        let mut ja = args.clone();
        ja.extend(["--format", "json"]);
        let js = String::from_utf8(voaplus(&ja).stdout).unwrap();
        assert_eq!(numeric_tokens(&text), numeric_tokens(&js), "{args:?}");
    }
}

#[test]
fn outputs_match_frozen_schema() {
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(root().join("schema/report-v1.schema.json")).unwrap())
            .unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let dir = tempfile::tempdir().unwrap();
    let batch = dir.path().join("b.txt");
    fs::write(&batch, "2A1\nZ1\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["analyze", "2A1"],
        vec!["analyze", "E8"],
        vec!["analyze", "B(rep(8))"],
        vec!["analyze", "A2"],
        vec!["analyze", "--batch", batch.to_str().unwrap()],
        vec!["shortvec", "A2", "--norm", "2/3", "--coset", "1/3,2/3"],
        vec!["rl", "B(hamming8)"],
        vec!["decompose", "B(zero(4))"],
        vec!["orbit", "2A1"],
        vec!["odd", "Z2"],
        vec!["selftest", "--inject-fault", "q-size"],
    ];
    for args in cases {
        let mut full = args.clone();
        full.extend(["--format", "json"]);
        let out = voaplus(&full);
        let v: Value = serde_json::from_slice(&out.stdout).expect("json output");
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    let out = voaplus(&["analyze", "--help"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("--batch"));
}
