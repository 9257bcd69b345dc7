//! Golden tests for the binary: frozen stdout bytes and exit codes.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

const O_EX: &str =
    "SubClassOf(A B)\nClassAssertion(A a)\nClassAssertion(B b)\nRoleAssertion(r a b)\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_elhgeo"))
}

/// Fixture path unique to the calling test so parallel tests never race.
fn fixture(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("elhgeo-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = bin().args(args).output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

#[test]
fn entail_prints_json_and_exits_by_verdict() {
    let oex = fixture("entail.elh", O_EX);
    let o = oex.to_str().unwrap();

    let (stdout, _, code) = run(&["entail", "--ontology", o, "--axiom", "ClassAssertion(B a)"]);
    assert_eq!(stdout, "{\"entailed\":true}\n");
    assert_eq!(code, 0);

    let (stdout, _, code) = run(&["entail", "--ontology", o, "--axiom", "SubClassOf(B A)"]);
    assert_eq!(stdout, "{\"entailed\":false}\n");
    assert_eq!(code, 1);
}

#[test]
fn normalize_writes_sorted_normal_form() {
    let mut child = bin()
        .args(["normalize", "--ontology", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"SubClassOf(Some(r And(A B)) C)\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "SubClassOf(And(A B) N_0)\nSubClassOf(N_0 A)\nSubClassOf(N_0 B)\nSubClassOf(Some(r N_0) C)\n"
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn canonical_and_embed_agree_between_both_sources() {
    let oex = fixture("embed.elh", O_EX);
    let o = oex.to_str().unwrap();
    let model = std::env::temp_dir().join(format!("elhgeo-{}-embed.model.json", std::process::id()));
    let m = model.to_str().unwrap();

    let (_, _, code) = run(&["canonical", "--ontology", o, "--out", m]);
    assert_eq!(code, 0);

    let (from_ontology, _, code) = run(&["embed", "--ontology", o, "--convex"]);
    assert_eq!(code, 0);
    let (from_interp, _, code) = run(&["embed", "--interpretation", m, "--convex"]);
    assert_eq!(code, 0);
    assert_eq!(from_ontology, from_interp, "same embedding either way");

    // repeat runs are byte-identical
    let (again, _, _) = run(&["embed", "--ontology", o, "--convex"]);
    assert_eq!(again, from_ontology);

    let parsed: serde_json::Value = serde_json::from_str(&from_ontology).unwrap();
    assert_eq!(parsed["dimension"], 16);
    assert_eq!(parsed["convex"], true);
}

#[test]
fn modelcheck_golden_output() {
    let oex = fixture("check.elh", O_EX);
    let emb = std::env::temp_dir().join(format!("elhgeo-{}-check.emb.json", std::process::id()));
    let e = emb.to_str().unwrap();
    let (_, _, code) = run(&["embed", "--ontology", oex.to_str().unwrap(), "--out", e]);
    assert_eq!(code, 0);

    let (stdout, _, code) = run(&[
        "modelcheck", "--embedding", e, "--axiom", "SubClassOf(B A)", "--deterministic",
    ]);
    assert_eq!(
        stdout,
        "{\"axiom\":\"SubClassOf(B A)\",\"counterexample\":\
         [[0,0,0,1,0,0,0,0,0,0,0,0,0,0,0,0]],\"verdict\":false}\n"
    );
    assert_eq!(code, 1);

    let (stdout, _, code) = run(&[
        "modelcheck", "--embedding", e, "--axiom", "ClassAssertion(Some(r B) a)", "--deterministic",
    ]);
    assert_eq!(
        stdout,
        "{\"axiom\":\"ClassAssertion(Some(r B) a)\",\"counterexample\":null,\"verdict\":true}\n"
    );
    assert_eq!(code, 0);

    // without --deterministic a timing field appears
    let (stdout, _, _) = run(&["modelcheck", "--embedding", e, "--axiom", "SubClassOf(A B)"]);
    assert!(stdout.contains("\"elapsed_us\":"), "{stdout}");
}

#[test]
fn faithfulness_golden_report() {
    let oex = fixture("faith.elh", O_EX);
    let o = oex.to_str().unwrap();

    let (stdout, _, code) = run(&["faithfulness", "--ontology", o, "--deterministic"]);
    assert_eq!(
        stdout,
        "{\n  \"ontology\": \"b016b0d17a16a0492bc86d2cd227a450f00b13668e9bb065c603cc1096063343\",\n  \"checked\": 41,\n  \"mismatches\": []\n}\n"
    );
    assert_eq!(code, 0);

    // sampling is reproducible for a fixed seed
    let sampled = &["faithfulness", "--ontology", o, "--deterministic", "--limit", "10", "--seed", "3"];
    let (first, _, code) = run(sampled);
    assert_eq!(code, 0);
    let (second, _, _) = run(sampled);
    assert_eq!(first, second);
    assert!(first.contains("\"checked\": 10"), "{first}");
}

#[test]
fn errors_map_to_usage_exit_code() {
    let oex = fixture("errors.elh", O_EX);
    let o = oex.to_str().unwrap();

    let (_, _, code) = run(&["embed"]);
    assert_eq!(code, 2, "embed needs a source");

    let (_, _, code) = run(&["entail", "--ontology", o, "--axiom", "SubClassOf(A"]);
    assert_eq!(code, 2, "syntax error in the axiom");

    let (_, _, code) = run(&["canonical", "--ontology", "/nonexistent.elh"]);
    assert_eq!(code, 2, "unreadable input");

    let (_, stderr, code) = run(&["entail", "--ontology", o, "--axiom", "ClassAssertion(Bottom a)"]);
    assert_eq!(code, 2, "{stderr}");
}

#[test]
fn help_lists_every_documented_flag() {
    for (cmd, flags) in [
        ("normalize", vec!["--ontology", "--out"]),
        ("entail", vec!["--ontology", "--axiom"]),
        ("canonical", vec!["--ontology", "--out"]),
        ("embed", vec!["--ontology", "--interpretation", "--convex", "--out"]),
        ("modelcheck", vec!["--embedding", "--axiom"]),
        ("faithfulness", vec!["--ontology", "--report", "--seed", "--limit", "--jobs"]),
    ] {
        let (stdout, _, code) = run(&[cmd, "--help"]);
        assert_eq!(code, 0);
        for flag in flags {
            assert!(stdout.contains(flag), "{cmd} --help missing {flag}");
        }
        assert!(stdout.contains("--deterministic"), "{cmd} --help missing the global flag");
    }
}
