use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use vidtriage::classify::{train_classifier, ClfConfig, LrModel, Target};
use vidtriage::seqtag::TaggerModel;
use vidtriage::synth::simulate_recommendation;
use vidtriage::textfeat::{extract_text_features, readability, TextLexicons};
use vidtriage_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(vt_last_error()) }.to_str().unwrap().to_owned()
}

/// Trains a small CRF tagger through the command line and returns its path.
fn crf_model(dir: &Path) -> PathBuf {
    std::fs::write(dir.join("small.toml"), "[tagger]\nepochs = 3\n").unwrap();
    let base = ["vidtriage", "--seed", "3", "--work-dir", dir.to_str().unwrap()];
    let config = ["--config", dir.join("small.toml").to_str().unwrap().to_owned().leak()];
    for tail in [
        &["synth", "--videos", "20"][..],
        &["build-ner-corpus"],
        &["train-tagger", "--arch", "crf"],
    ] {
        let args: Vec<&str> = base.iter().chain(&config).chain(tail).copied().collect();
        assert_eq!(vidtriage::cli::run(args), 0);
    }
    dir.join("tagger_crf.json")
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(vt_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn readability_matches_library() {
    let text = "The colon is part of the large intestine. Screening finds polyps early.";
    let mut grade = f64::NAN;
    let st = unsafe { vt_readability(c(text).as_ptr(), &mut grade) };
    assert_eq!(st, VtStatus::Ok);
    assert_eq!(grade, readability(text).unwrap());

    let st = unsafe { vt_readability(c("   ").as_ptr(), &mut grade) };
    assert_eq!(st, VtStatus::Numeric);
    assert!(last_error().contains("readability"));

    let st = unsafe { vt_readability(ptr::null(), &mut grade) };
    assert_eq!(st, VtStatus::NullArgument);
}

#[test]
fn invalid_utf8_is_reported() {
    let bytes = [0x66u8, 0xff, 0x00];
    let mut grade = 0.0;
    let st = unsafe { vt_readability(bytes.as_ptr().cast(), &mut grade) };
    assert_eq!(st, VtStatus::InvalidUtf8);
}

#[test]
fn text_features_match_library() {
    let text = "First, we explain the test. Finally, in summary, you prepare and we examine the colon.";
    let mut out = VtTextFeatures::default();
    assert_eq!(unsafe { vt_text_features(c(text).as_ptr(), &mut out) }, VtStatus::Ok);
    let f = extract_text_features(text, &TextLexicons::default());
    assert_eq!(out.word_count, f.word_count as u64);
    assert_eq!(out.unique_word_count, f.unique_word_count as u64);
    assert_eq!(out.sentence_count, f.sentence_count as u64);
    assert_eq!(out.transition_word_count, f.transition_word_count as u64);
    assert_eq!(out.summary_word_count, f.summary_word_count as u64);
    assert_eq!(out.active_verb_count, f.active_verb_count as u64);
    assert_eq!(out.readability, f.readability);
    assert!(out.readability_defined);
}

#[test]
fn tagger_handle_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = crf_model(dir.path());
    let model = TaggerModel::load(&path).unwrap();

    let mut tagger = ptr::null_mut();
    assert_eq!(
        unsafe { vt_tagger_load(c(path.to_str().unwrap()).as_ptr(), &mut tagger) },
        VtStatus::Ok
    );
    assert!(!tagger.is_null());

    let words = ["what", "is", "colon", "cancer", "screening"];
    let owned: Vec<CString> = words.iter().map(|w| c(w)).collect();
    let ptrs: Vec<*const std::ffi::c_char> = owned.iter().map(|s| s.as_ptr()).collect();
    let mut labels = [9u8; 5];
    let st = unsafe { vt_tagger_tag(tagger, ptrs.as_ptr(), ptrs.len(), labels.as_mut_ptr()) };
    assert_eq!(st, VtStatus::Ok);
    let expected: Vec<u8> = model
        .tag(&words.map(String::from))
        .unwrap()
        .iter()
        .map(|t| t.id() as u8)
        .collect();
    assert_eq!(labels.to_vec(), expected);
    assert!(labels.iter().all(|&l| l <= VT_LABEL_I));

    assert_eq!(
        unsafe { vt_tagger_tag(tagger, ptr::null(), 0, ptr::null_mut()) },
        VtStatus::Ok
    );

    let mut text = ptr::null_mut();
    let st = unsafe { vt_tagger_tag_text(tagger, c("What is colon cancer? Ask a doctor.").as_ptr(), &mut text) };
    assert_eq!(st, VtStatus::Ok);
    let conll = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_owned();
    unsafe { vt_string_free(text) };
    let blocks: Vec<&str> = conll.trim_end().split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
    assert!(blocks[0].lines().all(|l| l.split('\t').count() == 2));

    unsafe { vt_tagger_free(tagger) };
    unsafe { vt_tagger_free(ptr::null_mut()) };
}

#[test]
fn loading_errors_map_to_status() {
    let dir = tempfile::tempdir().unwrap();
    let mut tagger = ptr::null_mut();
    let missing = dir.path().join("missing.json");
    let st = unsafe { vt_tagger_load(c(missing.to_str().unwrap()).as_ptr(), &mut tagger) };
    assert_eq!(st, VtStatus::Io);
    assert!(tagger.is_null());
    assert!(last_error().contains("missing.json"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"format\": \"something-else\"}").unwrap();
    let mut clf = ptr::null_mut();
    let st = unsafe { vt_classifier_load(c(bad.to_str().unwrap()).as_ptr(), &mut clf) };
    assert_eq!(st, VtStatus::InvalidInput);
    assert!(clf.is_null());
}

#[test]
fn classifier_handle_round_trip() {
    let rows = simulate_recommendation(400, 11);
    let model = train_classifier(Target::Recommendation, &rows, 11, &ClfConfig::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clf.json");
    model.save(&path).unwrap();
    let model = LrModel::load(&path).unwrap();

    let mut clf = ptr::null_mut();
    assert_eq!(
        unsafe { vt_classifier_load(c(path.to_str().unwrap()).as_ptr(), &mut clf) },
        VtStatus::Ok
    );
    let n = unsafe { vt_classifier_n_features(clf) };
    assert_eq!(n, model.spec.features.len());
    for (i, name) in model.spec.features.iter().enumerate() {
        let got = unsafe { CStr::from_ptr(vt_classifier_feature_name(clf, i)) };
        assert_eq!(got.to_str().unwrap(), name);
    }
    assert!(unsafe { vt_classifier_feature_name(clf, n) }.is_null());

    for row in rows.iter().take(20) {
        let raw = model.spec.row(row).unwrap();
        let (mut p, mut label) = (f64::NAN, 9u8);
        let st = unsafe { vt_classifier_predict(clf, raw.as_ptr(), raw.len(), &mut p, &mut label) };
        assert_eq!(st, VtStatus::Ok);
        assert_eq!(p, model.probability(&raw));
        assert_eq!(label, u8::from(p >= 0.5));
    }

    let short = [0.0; 3];
    let mut p = 0.0;
    let st = unsafe { vt_classifier_predict(clf, short.as_ptr(), 3, &mut p, ptr::null_mut()) };
    assert_eq!(st, VtStatus::InvalidInput);
    let mut nan_row = model.spec.row(&rows[0]).unwrap();
    nan_row[0] = f64::NAN;
    let st = unsafe { vt_classifier_predict(clf, nan_row.as_ptr(), n, &mut p, ptr::null_mut()) };
    assert_eq!(st, VtStatus::InvalidInput);

    unsafe { vt_classifier_free(clf) };
    assert_eq!(unsafe { vt_classifier_n_features(ptr::null()) }, 0);
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/vidtriage.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "vt_readability",
        "vt_tagger_load",
        "vt_classifier_predict",
        "VT_STATUS_INVALID_INPUT",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .output()
    else {
        eprintln!("cc not available; skipping compile check");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
