use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn grammar() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../grammar")
}

fn lexrule(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexrule"))
        .arg("--grammar")
        .arg(grammar())
        .args(args)
        .env_remove("LEXRULE_GRAMMAR")
        .output()
        .expect("run lexrule")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_lines(o: &Output) -> Vec<String> {
    String::from_utf8(o.stderr.clone()).unwrap().lines().map(str::to_string).collect()
}

#[test]
fn analyze_prints_one_json_line_per_reading() {
    let o = lexrule(&["analyze", "kalemleri"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    for v in &lines {
        assert_eq!(v["surface"], "kalemleri");
        assert_eq!(v["phon"], "kalemleri");
        assert!(v["history"].is_array());
    }
}

#[test]
fn analyze_normalizes_input() {
    let o = lexrule(&["analyze", "KİTABI"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.contains("\"surface\":\"kitabı\"")));
}

#[test]
fn compiled_mode_gives_the_same_lines() {
    let a = lexrule(&["analyze", "okutuldu", "arabadaki"]);
    let b = lexrule(&["--mode", "compiled", "analyze", "okutuldu", "arabadaki"]);
    let sorted = |o: &Output| {
        let mut v: Vec<String> = stdout(o).lines().map(str::to_string).collect();
        v.sort();
        v
    };
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(sorted(&a), sorted(&b));
}

#[test]
fn unknown_word_exits_one() {
    let o = lexrule(&["analyze", "zzz"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
}

#[test]
fn generate_lists_forms() {
    let o = lexrule(&["generate", "sabah", "--spec", "deriv=CI"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "sabahçı");
    let o = lexrule(&["generate", "çağır", "--spec", "caus+past.3sg"]);
    assert_eq!(stdout(&o).trim(), "çağırttı");
}

#[test]
fn bad_spec_exits_two_with_one_line() {
    let o = lexrule(&["generate", "kitap", "--spec", "case=sideways"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr_lines(&o);
    assert_eq!(err.len(), 1, "{err:?}");
    assert!(err[0].starts_with("lexrule: "));
}

#[test]
fn missing_grammar_exits_two() {
    let o = Command::new(env!("CARGO_BIN_EXE_lexrule"))
        .args(["--grammar", "/nonexistent/grammar", "analyze", "ev"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_lines(&o).len(), 1);
}

#[test]
fn grammar_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_lexrule"))
        .env("LEXRULE_GRAMMAR", grammar())
        .args(["analyze", "evde"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("evde"));
}

#[test]
fn compile_writes_lexicon() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lex.json");
    let o = lexrule(&["compile", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let lex: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let text = lex.to_string();
    assert!(text.contains("\"kalemleri\""));
    let stats: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(stats.is_object());
}

#[test]
fn bench_reports_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let words = dir.path().join("words.txt");
    std::fs::write(&words, "% test\nkalemleri\nokuyabilirken\nzzz\n").unwrap();
    let o = lexrule(&["bench", "--words", words.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["words"], 3);
    assert_eq!(r["equivalent"], true);
    assert_eq!(r["unanalyzed"], serde_json::json!(["zzz"]));
    assert!(r["runtime"]["resident_entries"].as_u64().unwrap() < r["compiled"]["resident_entries"].as_u64().unwrap());
}
