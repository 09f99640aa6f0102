use std::path::PathBuf;
use std::process::Command;

use lgmodel::cli::{mirror_exit_code, EXIT_INPUT, EXIT_NOT_BIJECTIVE};
use lgmodel::mirror::MirrorError;
use lgmodel::suite::{run_paper_suite, SuiteInputs};

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("models")
        .join(name)
}

fn lgmodel(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lgmodel"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    model(name).to_string_lossy().into_owned()
}

#[test]
fn group_listing() {
    let (code, out, _) = lgmodel(&["group", &path("lt_sl.lg"), "--contributing"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("lt_sl / SL: order 81 modulo the torus, 141 contributing elements"));
    let types: Vec<&str> = out
        .lines()
        .skip_while(|l| !l.starts_with("orbit types"))
        .skip(1)
        .collect();
    assert_eq!(types.len(), 25);
    let members: usize = types
        .iter()
        .map(|l| {
            l.split_whitespace()
                .nth(1)
                .unwrap()
                .trim_start_matches('x')
                .parse::<usize>()
                .unwrap()
        })
        .sum();
    assert_eq!(members, 141);
    let (code, out, _) = lgmodel(&["group", &path("lt_j.lg")]);
    assert_eq!(code, 0);
    assert!(out.contains(", 3 relevant elements"));
}

#[test]
fn bad_model_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.lg");
    let text = std::fs::read_to_string(model("lt_j.lg"))
        .unwrap()
        .replace("weights 1 1 1 1 1 1", "weights 1 1 1");
    std::fs::write(&f, text).unwrap();
    let (code, _, err) = lgmodel(&["group", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("weights"), "{err}");
    let (code, _, _) = lgmodel(&["statespace", "/nonexistent/model.lg"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn statespace_formats_agree() {
    let (code, text, _) = lgmodel(&["statespace", &path("lt_sl.lg")]);
    assert_eq!(code, 0);
    assert!(text.contains("   0     73    0"));
    let (code, json, _) = lgmodel(&["statespace", &path("lt_sl.lg"), "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in ["model", "group", "hodge", "sectors"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["hodge"][1][1], 73);
    assert_eq!(v["hodge"][2][2], 73);
    let sectors = v["sectors"].as_array().unwrap();
    assert_eq!(sectors.len(), 141);
    let s = &sectors[1];
    for key in ["gamma", "n_gamma", "r_gamma", "age", "kind", "entries"] {
        assert!(s.get(key).is_some(), "sector missing {key}");
    }
    let total: usize = sectors
        .iter()
        .map(|s| s["entries"].as_array().unwrap().len())
        .sum();
    let grid: u64 = v["hodge"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r.as_array().unwrap())
        .map(|h| h.as_u64().unwrap())
        .sum();
    assert_eq!(total as u64, grid);
    let (code, tex, _) = lgmodel(&["statespace", &path("lt_j.lg"), "--format", "latex"]);
    assert_eq!(code, 0);
    assert!(tex.contains("\\begin{tabular}"));
}

#[test]
fn unknown_format_is_an_input_error() {
    let (code, _, err) = lgmodel(&["statespace", &path("lt_j.lg"), "--format", "yaml"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("yaml"));
}

#[test]
fn mirror_lt_pair() {
    let (code, out, _) = lgmodel(&["mirror", &path("lt_j.lg"), &path("lt_sl.lg"), "--check"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains(" -> ")).count(), 73);
    assert!(out.contains("bijective: 73 pairs, rank 73"));
    let (code, json, _) = lgmodel(&[
        "mirror",
        &path("lt_sl.lg"),
        &path("lt_j.lg"),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 73);
    let r = rows
        .iter()
        .find(|r| r["target_monomial"] == "p1*x1*x2*x3")
        .unwrap();
    assert_eq!(r["provenance"], "special-case");
    assert_eq!(r["source"]["generator"], "dt");
    assert_eq!(r["source"]["gamma"][0], "2/3");
}

#[test]
fn mirror_quintic_pair() {
    let (code, out, _) = lgmodel(&[
        "mirror",
        &path("quintic_j.lg"),
        &path("quintic_sl.lg"),
        "--check",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("twisted (204 pairs):"));
    assert!(out.contains("untwisted (4 pairs):"));
    assert!(out.contains("p^3*x1^3*x2^3*x3^3*x4^3*x5^3|(0,0,0,0,0;0)> -> dt|(4,4,4,4,4;0)/5>"));
}

#[test]
fn mismatched_models_are_an_input_error() {
    let (code, _, _) = lgmodel(&["mirror", &path("lt_j.lg"), &path("quintic_sl.lg")]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = lgmodel(&["mirror", &path("lt_j.lg"), &path("lt_j.lg")]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn exit_codes() {
    assert_eq!(
        mirror_exit_code(&MirrorError::NotBijective { dependent: vec![] }),
        EXIT_NOT_BIJECTIVE
    );
    assert_eq!(
        mirror_exit_code(&MirrorError::WrongModel(String::new())),
        EXIT_INPUT
    );
}

#[test]
fn paper_suite_exit_code_follows_results() {
    let (code, out, _) = lgmodel(&["paper-suite"]);
    let lines: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert_eq!(lines.len(), 8);
    let all_pass = lines.iter().all(|l| l.starts_with("PASS"));
    assert_eq!(code, if all_pass { 0 } else { 1 });
}

#[test]
fn corrupted_model_fails_the_suite() {
    let inputs = SuiteInputs {
        lt_sl: SuiteInputs::default()
            .lt_sl
            .replace("group SL", "group MAXIMAL"),
        ..SuiteInputs::default()
    };
    let r = run_paper_suite(&inputs);
    assert!(r.iter().any(|c| !c.passed));
    let inputs = SuiteInputs {
        quintic_sl: SuiteInputs::default()
            .quintic_sl
            .replace("group SL", "group J"),
        ..SuiteInputs::default()
    };
    let r = run_paper_suite(&inputs);
    assert!(!r.iter().find(|c| c.id == 6).unwrap().passed);
}
