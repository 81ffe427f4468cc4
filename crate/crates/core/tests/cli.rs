use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn vidtriage(work: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vidtriage"))
        .arg("--work-dir")
        .arg(work)
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for entry in std::fs::read_dir(from).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, to.join(p.file_name().unwrap())).unwrap();
    }
}

#[test]
fn ingest_fixture_summary() {
    let work = tempfile::tempdir().unwrap();
    let corpus = fixtures().join("five_videos");
    let out = vidtriage(work.path(), &["ingest", "--corpus-dir", corpus.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "5 videos, 5 transcripts, 5 ocr, 15 labels");
}

#[test]
fn help_and_version_exit_zero() {
    let work = tempfile::tempdir().unwrap();
    assert_eq!(vidtriage(work.path(), &["--help"]).status.code(), Some(0));
    let v = vidtriage(work.path(), &["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn usage_errors_exit_64() {
    let work = tempfile::tempdir().unwrap();
    let out = vidtriage(work.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("Usage"));
    // Training without a seed is refused rather than defaulted.
    let out = vidtriage(work.path(), &["train-clf", "--target", "recommendation"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("--seed"));
    let out = vidtriage(work.path(), &["report", "--table", "3"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn missing_input_exits_1_with_path() {
    let work = tempfile::tempdir().unwrap();
    let out = vidtriage(work.path(), &["featurize"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("videos.jsonl"), "{}", stderr(&out));
}

#[test]
fn malformed_line_exits_1_with_location() {
    let work = tempfile::tempdir().unwrap();
    let corpus = work.path().join("corpus");
    copy_dir(&fixtures().join("five_videos"), &corpus);
    let mut text = std::fs::read_to_string(corpus.join("labels.jsonl")).unwrap();
    text.push_str("{\"video_id\": \"v1\", \"medical_info_high\": 2, \"understandable\": 1, \"recommended\": 1}\n");
    std::fs::write(corpus.join("labels.jsonl"), text).unwrap();
    let out = vidtriage(work.path(), &["ingest"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("labels.jsonl:16"), "{}", stderr(&out));
}

#[test]
fn bad_config_is_rejected() {
    let work = tempfile::tempdir().unwrap();
    let cfg = work.path().join("c.toml");
    std::fs::write(&cfg, "split_fraction = 1.5\n").unwrap();
    let out = vidtriage(work.path(), &["--config", cfg.to_str().unwrap(), "ingest"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("split_fraction"));
}

#[test]
fn api_responses_are_flattened() {
    let work = tempfile::tempdir().unwrap();
    let resp = fixtures().join("api_response.json");
    let out = vidtriage(work.path(), &["ingest", "--api-response", resp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(work.path().join("videos.jsonl")).unwrap();
    let rows: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["video_id"], "abc123");
    assert_eq!(rows[0]["duration_s"], 302);
    assert_eq!(rows[0]["view_count"], 1200);
    assert_eq!(rows[1]["view_count"], 0);
    assert!(rows[1].get("like_count").is_none());
}

#[test]
fn search_results_are_checked_against_keywords() {
    let work = tempfile::tempdir().unwrap();
    let hits = fixtures().join("search_results.jsonl");
    let out = vidtriage(work.path(), &["ingest", "--search-results", hits.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "3 search results, 2 unique video ids");
    let ids = std::fs::read_to_string(work.path().join("search_ids.txt")).unwrap();
    assert_eq!(ids, "abc123\ndef456\n");

    let kw = work.path().join("kw.txt");
    std::fs::write(&kw, "# only one\ncolonoscopy\n").unwrap();
    let out = vidtriage(
        work.path(),
        &[
            "ingest",
            "--search-results",
            hits.to_str().unwrap(),
            "--keywords",
            kw.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("search_results.jsonl:2"), "{}", stderr(&out));
}

#[test]
fn featurize_and_ner_on_fixture() {
    let work = tempfile::tempdir().unwrap();
    copy_dir(&fixtures().join("five_videos"), &work.path().join("corpus"));
    let out = vidtriage(work.path(), &["featurize"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let tsv = std::fs::read_to_string(work.path().join("text_features.tsv")).unwrap();
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines.len(), 6);
    let header: Vec<&str> = lines[0].split('\t').collect();
    assert_eq!(header[0], "video_id");
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let v1: Vec<&str> = lines[1].split('\t').collect();
    assert_eq!(v1[0], "v1");
    assert_eq!(v1[col("duration_s")], "208");
    assert_eq!(v1[col("n_transition_words_v")], "2");
    assert_eq!(v1[col("n_summary_words_v")], "1");
    let v3: Vec<&str> = lines[3].split('\t').collect();
    assert_eq!(v3[col("has_description")], "0");
    assert_eq!(v3[col("n_words_v")], "0");

    let out = vidtriage(work.path(), &["build-ner-corpus"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let conll = std::fs::read_to_string(work.path().join("ner.conll")).unwrap();
    assert!(conll.contains("colon\tB-MED\ncancer\tI-MED\n"), "{conll}");
    assert!(conll.contains("stool\tB-MED\ntest\tI-MED\n"));

    let out = vidtriage(work.path(), &["build-ner-corpus", "--mode", "word"]);
    assert_eq!(out.status.code(), Some(0));
    let conll = std::fs::read_to_string(work.path().join("ner.conll")).unwrap();
    assert!(conll.contains("colon\tB-MED\ncancer\tB-MED\n"), "{conll}");
}

#[test]
fn commands_do_not_touch_inputs() {
    let work = tempfile::tempdir().unwrap();
    let corpus = work.path().join("corpus");
    copy_dir(&fixtures().join("five_videos"), &corpus);
    let before: Vec<Vec<u8>> = ["videos", "transcripts", "ocr", "labels"]
        .iter()
        .map(|f| std::fs::read(corpus.join(format!("{f}.jsonl"))).unwrap())
        .collect();
    for cmd in [&["ingest"][..], &["featurize"], &["build-ner-corpus"]] {
        assert_eq!(vidtriage(work.path(), cmd).status.code(), Some(0));
    }
    let first = std::fs::read(work.path().join("text_features.tsv")).unwrap();
    assert_eq!(vidtriage(work.path(), &["featurize"]).status.code(), Some(0));
    assert_eq!(std::fs::read(work.path().join("text_features.tsv")).unwrap(), first);
    for (f, old) in ["videos", "transcripts", "ocr", "labels"].iter().zip(before) {
        assert_eq!(std::fs::read(corpus.join(format!("{f}.jsonl"))).unwrap(), old, "{f}");
    }
}
