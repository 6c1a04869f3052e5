//! CLI behavior: exit codes, error messages, artifact layout, overrides.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn stancekit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stancekit"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write_small_corpus(dir: &Path) {
    let mut lines = String::new();
    for i in 0..30 {
        let tag = match i % 3 {
            0 => " #voteremain",
            1 => " #voteleave",
            _ => "",
        };
        lines.push_str(&format!(
            concat!(
                r#"{{"id":"t{i}","user_id":"u{u}","created_at":"2016-0{m}-10T12:00:00Z","#,
                r#""text":"tweet number {i}{tag}","lang":"en","retweet_count":{rt},"like_count":1}}"#,
                "\n"
            ),
            i = i,
            u = i % 7,
            m = (i % 6) + 1,
            rt = i,
            tag = tag,
        ));
    }
    lines.push_str("{broken line\n");
    fs::write(dir.join("corpus.jsonl"), lines).unwrap();
}

#[test]
fn ingest_writes_corpus_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    write_small_corpus(dir.path());
    let output = stancekit(dir.path(), &["--input", "corpus.jsonl", "--out", "run", "ingest"]);
    assert!(output.status.success(), "{}", stderr(&output));

    let rejects = fs::read_to_string(dir.path().join("run/rejects.csv")).unwrap();
    let mut lines = rejects.lines();
    assert!(lines.next().unwrap().starts_with("# tool=stancekit-"));
    assert_eq!(lines.next(), Some("line_no,reason"));
    assert!(lines.next().unwrap().starts_with("31,"));

    let corpus = fs::read_to_string(dir.path().join("run/corpus.jsonl")).unwrap();
    assert_eq!(corpus.lines().count(), 30);
    assert!(dir.path().join("run/manifest.json").exists());
}

#[test]
fn strict_ingest_aborts_on_malformed_line() {
    let dir = tempfile::tempdir().unwrap();
    write_small_corpus(dir.path());
    let output = stancekit(dir.path(), &["--input", "corpus.jsonl", "--out", "run", "--strict", "ingest"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("malformed record at line 31"), "{}", stderr(&output));
}

#[test]
fn missing_input_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let output = stancekit(dir.path(), &["--out", "run", "ingest"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("invalid config input"), "{}", stderr(&output));
}

#[test]
fn missing_upstream_artifact_exits_2_naming_stage() {
    let dir = tempfile::tempdir().unwrap();
    let output = stancekit(dir.path(), &["--out", "run", "stats"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("`ingest`"), "{}", stderr(&output));

    write_small_corpus(dir.path());
    let output = stancekit(dir.path(), &["--input", "corpus.jsonl", "--out", "run", "ingest"]);
    assert!(output.status.success());
    let output = stancekit(dir.path(), &["--out", "run", "stance-predict"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("`stance-train`"), "{}", stderr(&output));
}

#[test]
fn degenerate_training_set_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let mut labels = String::from("tweet_id,text,label\n");
    for i in 0..25 {
        labels.push_str(&format!("l{i},all the same side here,leave\n"));
    }
    fs::write(dir.path().join("labels.csv"), labels).unwrap();
    let output = stancekit(dir.path(), &["--labels", "labels.csv", "--out", "run", "stance-train"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("degenerate training set"), "{}", stderr(&output));
}

#[test]
fn invalid_config_value_names_key() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "[thresholds]\nbot = 3.0\n").unwrap();
    let output = stancekit(dir.path(), &["--config", "bad.toml", "ingest"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("thresholds.bot"), "{}", stderr(&output));
}

#[test]
fn unknown_config_key_names_key() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "frobnicate = true\n").unwrap();
    let output = stancekit(dir.path(), &["--config", "bad.toml", "ingest"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("frobnicate"), "{}", stderr(&output));
}

#[test]
fn config_path_from_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    write_small_corpus(dir.path());
    fs::write(dir.path().join("env.toml"), "input = \"corpus.jsonl\"\nout = \"envrun\"\n").unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_stancekit"))
        .current_dir(dir.path())
        .env("STANCEKIT_CONFIG", "env.toml")
        .arg("ingest")
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(dir.path().join("envrun/corpus.jsonl").exists());
}

#[test]
fn lexicon_override_changes_rule_classification() {
    let dir = tempfile::tempdir().unwrap();
    write_small_corpus(dir.path());
    fs::write(
        dir.path().join("lexicon.json"),
        r#"{"remain":["voteleave"],"leave":["voteremain"],"ambiguous":[]}"#,
    )
    .unwrap();
    let output = stancekit(dir.path(), &["--input", "corpus.jsonl", "--out", "run", "ingest"]);
    assert!(output.status.success());
    fs::write(
        dir.path().join("swapped.toml"),
        "input = \"corpus.jsonl\"\nout = \"run\"\nlexicon = \"lexicon.json\"\n",
    )
    .unwrap();
    let output = stancekit(dir.path(), &["--config", "swapped.toml", "stance-rules"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let summary = fs::read_to_string(dir.path().join("run/stance/rule_summary.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&summary).unwrap();
    // The swapped lexicon inverts the two sides: 10 tweets carry
    // #voteremain (now leave) and 10 carry #voteleave (now remain).
    assert_eq!(value["data"]["tweets_remain"], 10);
    assert_eq!(value["data"]["tweets_leave"], 10);
}

#[test]
fn lang_filter_flag_applies_at_ingest() {
    let dir = tempfile::tempdir().unwrap();
    let lines = concat!(
        r#"{"id":"1","user_id":"a","created_at":"2016-01-01T00:00:00Z","text":"hello","lang":"en","retweet_count":0,"like_count":0}"#,
        "\n",
        r#"{"id":"2","user_id":"b","created_at":"2016-01-02T00:00:00Z","text":"bonjour","lang":"fr","retweet_count":0,"like_count":0}"#,
        "\n",
    );
    fs::write(dir.path().join("corpus.jsonl"), lines).unwrap();
    let output = stancekit(
        dir.path(),
        &["--input", "corpus.jsonl", "--out", "run", "--lang", "fr", "ingest"],
    );
    assert!(output.status.success(), "{}", stderr(&output));
    let corpus = fs::read_to_string(dir.path().join("run/corpus.jsonl")).unwrap();
    assert_eq!(corpus.lines().count(), 1);
    assert!(corpus.contains("bonjour"));
}
