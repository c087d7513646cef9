use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_fieldnorm");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn normalize_writes_a_valid_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f1.tsv");
    let o = run(&["normalize", s(&fixture("excerpt_raw.txt")), "--lexicon", s(&fixture("excerpt_lexicon.tsv")), "-o", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(text.contains("ts'u&\t\t\t\t\nmóno\tc'o:mu\t'destroy, devour'\t"));

    let o = run(&["validate", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn empty_input_gives_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.txt");
    std::fs::write(&input, "").unwrap();
    let out = dir.path().join("empty.tsv");
    let o = run(&["normalize", s(&input), "--lexicon", s(&fixture("excerpt_lexicon.tsv")), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), b"");
}

#[test]
fn unreadable_lexicon_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.tsv");
    let o = run(&["normalize", s(&fixture("excerpt_raw.txt")), "--lexicon", s(&dir.path().join("missing.tsv")), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.tsv"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "no stray temp files");
}

#[test]
fn bad_options_exit_2() {
    let lex = fixture("excerpt_lexicon.tsv");
    let raw = fixture("excerpt_raw.txt");
    for extra in [&["--threshold", "1.5"][..], &["--suffix-policy", "@x"], &["--foreign-pattern", "("]] {
        let mut args = vec!["normalize", s(&raw), "--lexicon", s(&lex)];
        args.extend_from_slice(extra);
        assert_eq!(run(&args).status.code(), Some(2), "{extra:?}");
    }
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn validate_names_offending_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    std::fs::write(&bad, "mak\tmak'\t'1DU'\t100.0%\tPN\nts'u&\t\t\t\t\n").unwrap();
    let o = run(&["validate", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line 2"), "{}", stdout(&o));

    let o = run(&["validate", s(&fixture("excerpt_legacy.tsv"))]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["validate", "--legacy", s(&fixture("excerpt_legacy.tsv"))]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn tag_fills_legacy_pos_column() {
    let o = run(&["tag", "--legacy", s(&fixture("excerpt_legacy.tsv")), "--lexicon", s(&fixture("excerpt_lexicon.tsv"))]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), std::fs::read_to_string(fixture("excerpt.tsv")).unwrap());
}

#[test]
fn tag_conflicts_logged_as_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("lex.tsv");
    std::fs::write(&lex, "traw\tthat\tDT\ntraw\tand\tCC\n").unwrap();
    let corpus = dir.path().join("c.tsv");
    std::fs::write(&corpus, "tr`aw\ttraw\t'that'\t100.0%\tDT\n").unwrap();
    let diag = dir.path().join("diag.jsonl");
    let o = run(&["tag", s(&corpus), "--lexicon", s(&lex), "--diagnostics", s(&diag)]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("\tUN\n"));
    let line: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&diag).unwrap().trim()).unwrap();
    assert_eq!(line["lemma"], "traw");
    assert_eq!(line["candidates"], serde_json::json!(["CC", "DT"]));
    assert_eq!(line["position"], 0);
}

#[test]
fn foreign_pattern_marks_tokens() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("t.txt");
    std::fs::write(&raw, "mak Mister").unwrap();
    let o = run(&["normalize", s(&raw), "--lexicon", s(&fixture("excerpt_lexicon.tsv")), "--foreign-pattern", "[A-Z].*"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().nth(1), Some("Mister\tMister\t[foreign]\t100.0%\tFW"));
}

#[test]
fn stats_and_eval_reports() {
    let f1 = fixture("excerpt.tsv");
    let o = run(&["stats", s(&f1)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("parameter\ttotal count\ntotal non-whitespace characters\t66\n"));
    assert!(text.contains("total gold-standard words\t15\n"));
    assert!(text.ends_with("Total\t\t15\n"));

    let o = run(&["eval", s(&f1), s(&f1)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with(
        "Metric\tPerformance\nWER\t0.0000\nBLEU-1\t1.0000\nBLEU-2\t1.0000\nBLEU-3\t1.0000\nBLEU-4\t1.0000\n"
    ));

    let o = run(&["stats", "--json", s(&f1)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["unique_words"], 14);
}

#[test]
fn eval_pairs_directories_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let (hyp, gold) = (dir.path().join("hyp"), dir.path().join("gold"));
    std::fs::create_dir_all(&hyp).unwrap();
    std::fs::create_dir_all(&gold).unwrap();
    std::fs::write(gold.join("a.tsv"), "x\ta\t\t100.0%\tNN\ny\tb\t\t100.0%\tNN\n").unwrap();
    std::fs::write(hyp.join("a.tsv"), "x\ta\t\t100.0%\tNN\ny\tc\t\t100.0%\tNN\n").unwrap();
    let o = run(&["eval", "--json", s(&hyp), s(&gold)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["wer"], 0.5);
    assert_eq!(v["bleu"]["1"], 0.5);

    std::fs::write(hyp.join("b.tsv"), "x\ta\t\t100.0%\tNN\n").unwrap();
    assert_eq!(run(&["eval", s(&hyp), s(&gold)]).status.code(), Some(2));
}
