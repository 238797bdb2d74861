use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use clap::Parser;
use pte_cli::{run, Cli, EXIT_DIVERGENCE, EXIT_EMPTY, EXIT_ERROR, EXIT_TIES};

fn fixture(name: &str) -> String {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "core",
        "tests",
        "fixtures",
        name,
    ]
    .iter()
    .collect();
    path.to_string_lossy().into_owned()
}

/// Runs the command in process, returning (exit code, stdout, stderr).
fn pte(args: &[&str], stdin: &str) -> (i32, String, String) {
    let cli = Cli::try_parse_from(std::iter::once("pte").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(cli, &mut stdin.as_bytes(), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

const TIED: &str = r#"{"players":["p"],"actions":["l","r"],"root":"n",
    "nodes":[{"id":"n","player":"p","infoset":"n","moves":{"l":"x","r":"y"}}],
    "outcomes":[{"id":"x","payoffs":{"p":1}},{"id":"y","payoffs":{"p":1}}]}"#;

#[test]
fn solve_prisoners_dilemma() {
    let (code, out, _) = pte(&["solve", &fixture("pd.json")], "");
    assert_eq!(code, 0);
    let (json, status) = out.rsplit_once("}\n").unwrap();
    let trace: serde_json::Value = serde_json::from_str(&format!("{json}}}")).unwrap();
    assert_eq!(trace["equilibrium"], "(C,c)");
    assert_eq!(trace["trace"].as_array().unwrap().len(), 3);
    assert_eq!(status.trim(), "status: unique equilibrium (C,c)");
}

#[test]
fn exit_codes_follow_status() {
    let (code, out, _) = pte(
        &["solve", "--quiet", &fixture("empty_pte_witness.json")],
        "",
    );
    assert_eq!((code, out.as_str()), (EXIT_EMPTY, "status: empty\n"));
    let (code, out, _) = pte(&["solve", "--quiet"], TIED);
    assert_eq!(code, EXIT_TIES);
    assert_eq!(out, "status: multiple_with_ties x y\n");
}

#[test]
fn empty_result_reports_last_surviving_set() {
    let (_, out, _) = pte(&["solve", &fixture("empty_pte_witness.json")], "");
    let json = out.rsplit_once("}\n").unwrap().0;
    let trace: serde_json::Value = serde_json::from_str(&format!("{json}}}")).unwrap();
    assert_eq!(trace["status"], "empty");
    assert!(trace["equilibrium"].is_null());
    assert!(!trace["last_nonempty"].as_array().unwrap().is_empty());
    assert!(trace["eliminating_step"].is_u64());
}

#[test]
fn parse_errors_exit_one() {
    let (code, _, err) = pte(&["solve"], "");
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("EMPTY"), "{err}");
    let (code, _, err) = pte(&["validate"], "{\"players\": [}");
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("line 1"), "{err}");
    let (code, _, err) = pte(&["solve", "/nonexistent/game.json"], "");
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("cannot read"), "{err}");
}

#[test]
fn validate_reports_structure() {
    let (code, out, _) = pte(&["validate", &fixture("pd.json")], "");
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["is_canonical"], true);
    assert_eq!(report["has_perfect_recall"], true);
    let forest = r#"{"players":["p"],"actions":["l"],"root":"n",
        "nodes":[{"id":"n","player":"p","infoset":"n","moves":{"l":"x"}}],
        "outcomes":[{"id":"x","payoffs":{"p":1}},{"id":"y","payoffs":{"p":2}}]}"#;
    let (code, out, _) = pte(&["validate"], forest);
    assert_eq!(code, EXIT_ERROR);
    assert!(out.contains("FOREST"), "{out}");
}

const LOOP: &str = r#"{"players":["p","q"],"actions":["l","r"],"root":"n1",
    "nodes":[{"id":"n1","player":"p","infoset":"I","moves":{"l":"n2","r":"x"}},
             {"id":"n2","player":"p","infoset":"I","moves":{"l":"y","r":"z"}}],
    "outcomes":[{"id":"x","payoffs":{"p":1,"q":1}},{"id":"y","payoffs":{"p":2,"q":3}},
                {"id":"z","payoffs":{"p":3,"q":2}}]}"#;

#[test]
fn non_canonical_games_need_the_flag() {
    let (code, _, err) = pte(&["solve"], LOOP);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("not canonical"), "{err}");
    let (code, out, _) = pte(&["solve", "--quiet", "--canonicalize"], LOOP);
    assert_eq!((code, out.as_str()), (0, "status: unique equilibrium y\n"));
    let (code, out, _) = pte(&["canonicalize"], LOOP);
    assert_eq!(code, 0);
    assert!(!out.contains("\"z\""), "{out}");
}

#[test]
fn spacetime_build_prints_order_and_game() {
    let (code, out, _) = pte(&["spacetime-build", &fixture("spacetime_example.json")], "");
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        doc["order"],
        serde_json::json!(["a", "b", "c", "d", "e", "f"])
    );
    assert_eq!(doc["game"]["outcomes"].as_array().unwrap().len(), 14);
    let (code, game_only, _) = pte(
        &[
            "spacetime-build",
            "--game-only",
            &fixture("spacetime_example.json"),
        ],
        "",
    );
    assert_eq!(code, 0);
    let (code, _, _) = pte(&["solve", "--quiet"], &game_only);
    assert!([0, EXIT_EMPTY].contains(&code));
}

#[test]
fn spacetime_build_rejects_bad_triangles() {
    let text = std::fs::read_to_string(fixture("spacetime_example.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["contingency"]["f"].as_object_mut().unwrap().remove("e");
    let (code, _, err) = pte(&["spacetime-build"], &doc.to_string());
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("contingency"), "{err}");
}

#[test]
fn export_dot_steps() {
    let (code, first, _) = pte(&["export-dot", "--step", "0", &fixture("pd.json")], "");
    assert_eq!(code, 0);
    assert!(first.starts_with("digraph") && !first.contains("gray"));
    let (_, last, _) = pte(&["export-dot", &fixture("pd.json")], "");
    assert_eq!(last.matches("color=gray,").count(), 3);
    let (code, _, err) = pte(&["export-dot", "--step", "9", &fixture("pd.json")], "");
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("out of range"));
    let single = r#"{"players":["p"],"actions":[],"root":"z","nodes":[],"outcomes":[{"id":"z","payoffs":{"p":1}}]}"#;
    let (_, dot, _) = pte(&["export-dot"], single);
    assert!(!dot.contains("gray") && dot.contains("peripheries=2"));
}

#[test]
fn oracle_compare_files_and_random() {
    let (code, out, _) = pte(
        &[
            "oracle-compare",
            &fixture("pd.json"),
            &fixture("empty_pte_witness.json"),
            "--random",
            "40",
            "--seed",
            "7",
        ],
        "",
    );
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.trim(), "compared 42 games, 0 divergent");
    assert_ne!(EXIT_DIVERGENCE, 0);
}

#[test]
fn search_counterexample_matches_fixture() {
    let (code, out, _) = pte(&["search-counterexample", "--max-actions", "2"], "");
    assert_eq!(code, 0);
    let committed = std::fs::read_to_string(fixture("empty_pte_witness.json")).unwrap();
    assert_eq!(out, committed);
    let (code, out, _) = pte(&["search-counterexample", "--max-actions", "1"], "");
    assert_eq!(code, 0);
    assert!(out.contains("no game"));
}

#[test]
fn unknown_flags_are_rejected_before_work() {
    assert!(Cli::try_parse_from(["pte", "solve", "--bogus"]).is_err());
    assert!(Cli::try_parse_from(["pte", "frobnicate"]).is_err());
}

#[test]
fn binary_reads_stdin_and_sets_exit_status() {
    let game = std::fs::read_to_string(fixture("empty_pte_witness.json")).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_pte"))
        .args(["solve", "--quiet", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(game.as_bytes())
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert_eq!(output.status.code(), Some(EXIT_EMPTY));
    assert_eq!(String::from_utf8(output.stdout).unwrap(), "status: empty\n");
}

#[test]
fn binary_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("game.json");
    std::fs::write(&path, std::fs::read_to_string(fixture("pd.json")).unwrap()).unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_pte"))
        .args(["solve", "--quiet"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let output = Command::new(env!("CARGO_BIN_EXE_pte"))
        .args(["export-dot"])
        .arg(&path)
        .output()
        .unwrap();
    let again = Command::new(env!("CARGO_BIN_EXE_pte"))
        .args(["export-dot"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(output.stdout, again.stdout);
}
