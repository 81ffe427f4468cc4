//! C interface to the vidtriage tagger, classifier and text statistics.
//!
//! Every fallible function returns a [`VtStatus`]; on failure the message is
//! available from [`vt_last_error`] on the same thread. Handles are opaque
//! and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use vidtriage::classify::LrModel;
use vidtriage::seqtag::TaggerModel;
use vidtriage::textfeat::{extract_text_features, readability, tokenize, TextLexicons};
use vidtriage::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed or inconsistent input, including model files.
    InvalidInput = 3,
    Io = 4,
    /// Numerical failure, e.g. text without words for readability.
    Numeric = 5,
    Panic = 6,
}

/// Label ids written by [`vt_tagger_tag`].
pub const VT_LABEL_O: u8 = 0;
pub const VT_LABEL_B: u8 = 1;
pub const VT_LABEL_I: u8 = 2;

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VtTextFeatures {
    pub word_count: u64,
    pub unique_word_count: u64,
    pub sentence_count: u64,
    pub transition_word_count: u64,
    pub summary_word_count: u64,
    pub active_verb_count: u64,
    /// Flesch-Kincaid grade; 0 when `readability_defined` is false.
    pub readability: f64,
    pub readability_defined: bool,
}

/// A loaded tagger model.
pub struct VtTagger {
    model: TaggerModel,
}

/// A loaded logistic-regression classifier.
pub struct VtClassifier {
    model: LrModel,
    names: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn status_of(err: &Error) -> VtStatus {
    match err {
        Error::Io { .. } => VtStatus::Io,
        Error::UndefinedReadability
        | Error::Diverged { .. }
        | Error::NotConverged { .. }
        | Error::SingularInformation => VtStatus::Numeric,
        _ => VtStatus::InvalidInput,
    }
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), VtStatus>) -> VtStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VtStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            VtStatus::Panic
        }
    }
}

fn fail(err: Error) -> VtStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn null(what: &str) -> VtStatus {
    set_error(format!("{what} is null"));
    VtStatus::NullArgument
}

/// # Safety
/// `s` is null or a valid nul-terminated string.
unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, VtStatus> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|e| {
        set_error(format!("{what}: {e}"));
        VtStatus::InvalidUtf8
    })
}

/// Message describing the last failure on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn vt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn vt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Flesch-Kincaid grade level of `text`.
///
/// # Safety
/// `text` is a nul-terminated string and `out` points to writable memory.
#[no_mangle]
pub unsafe extern "C" fn vt_readability(text: *const c_char, out: *mut f64) -> VtStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = readability(text).map_err(fail)?;
        Ok(())
    })
}

/// Word, sentence and lexicon counts of `text` using the shipped word lists.
///
/// # Safety
/// `text` is a nul-terminated string and `out` points to writable memory.
#[no_mangle]
pub unsafe extern "C" fn vt_text_features(text: *const c_char, out: *mut VtTextFeatures) -> VtStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = extract_text_features(text, &TextLexicons::default());
        *out = VtTextFeatures {
            word_count: f.word_count as u64,
            unique_word_count: f.unique_word_count as u64,
            sentence_count: f.sentence_count as u64,
            transition_word_count: f.transition_word_count as u64,
            summary_word_count: f.summary_word_count as u64,
            active_verb_count: f.active_verb_count as u64,
            readability: f.readability,
            readability_defined: f.readability_defined,
        };
        Ok(())
    })
}

/// Loads a tagger model file.
///
/// # Safety
/// `path` is a nul-terminated string and `out` points to writable memory.
#[no_mangle]
pub unsafe extern "C" fn vt_tagger_load(path: *const c_char, out: *mut *mut VtTagger) -> VtStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let model = TaggerModel::load(Path::new(path)).map_err(fail)?;
        *out = Box::into_raw(Box::new(VtTagger { model }));
        Ok(())
    })
}

/// # Safety
/// `tagger` is null or a handle from [`vt_tagger_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vt_tagger_free(tagger: *mut VtTagger) {
    if !tagger.is_null() {
        drop(Box::from_raw(tagger));
    }
}

/// Tags one tokenized sentence, writing `n_tokens` label ids
/// (`VT_LABEL_O`, `VT_LABEL_B`, `VT_LABEL_I`) to `labels`.
///
/// # Safety
/// `tokens` points to `n_tokens` nul-terminated strings and `labels` to
/// `n_tokens` writable bytes. Both may be null when `n_tokens` is 0.
#[no_mangle]
pub unsafe extern "C" fn vt_tagger_tag(
    tagger: *const VtTagger,
    tokens: *const *const c_char,
    n_tokens: usize,
    labels: *mut u8,
) -> VtStatus {
    guard(|| {
        let tagger = tagger.as_ref().ok_or_else(|| null("tagger"))?;
        if n_tokens == 0 {
            return Ok(());
        }
        if tokens.is_null() {
            return Err(null("tokens"));
        }
        if labels.is_null() {
            return Err(null("labels"));
        }
        let words = std::slice::from_raw_parts(tokens, n_tokens)
            .iter()
            .map(|&t| str_arg(t, "token").map(str::to_owned))
            .collect::<Result<Vec<_>, _>>()?;
        let tags = tagger.model.tag(&words).map_err(fail)?;
        let out = std::slice::from_raw_parts_mut(labels, n_tokens);
        for (o, t) in out.iter_mut().zip(tags) {
            *o = t.id() as u8;
        }
        Ok(())
    })
}

/// Tokenizes `text`, tags every sentence and returns `token<TAB>label`
/// lines with a blank line after each sentence. Free the result with
/// [`vt_string_free`].
///
/// # Safety
/// `text` is a nul-terminated string and `out` points to writable memory.
#[no_mangle]
pub unsafe extern "C" fn vt_tagger_tag_text(
    tagger: *const VtTagger,
    text: *const c_char,
    out: *mut *mut c_char,
) -> VtStatus {
    guard(|| {
        let tagger = tagger.as_ref().ok_or_else(|| null("tagger"))?;
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let tok = tokenize(text);
        let mut conll = String::new();
        for sentence in tok.sentence_tokens() {
            let tags = tagger.model.tag(sentence).map_err(fail)?;
            for (w, t) in sentence.iter().zip(tags) {
                conll.push_str(&format!("{w}\t{t}\n"));
            }
            conll.push('\n');
        }
        *out = CString::new(conll)
            .map_err(|e| fail(Error::Invalid(e.to_string())))?
            .into_raw();
        Ok(())
    })
}

/// Loads a classifier model file.
///
/// # Safety
/// `path` is a nul-terminated string and `out` points to writable memory.
#[no_mangle]
pub unsafe extern "C" fn vt_classifier_load(path: *const c_char, out: *mut *mut VtClassifier) -> VtStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let model = LrModel::load(Path::new(path)).map_err(fail)?;
        let names = model
            .spec
            .features
            .iter()
            .map(|n| CString::new(n.as_str()).expect("feature names have no nul bytes"))
            .collect();
        *out = Box::into_raw(Box::new(VtClassifier { model, names }));
        Ok(())
    })
}

/// # Safety
/// `clf` is null or a handle from [`vt_classifier_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vt_classifier_free(clf: *mut VtClassifier) {
    if !clf.is_null() {
        drop(Box::from_raw(clf));
    }
}

/// Number of input features; 0 for a null handle.
///
/// # Safety
/// `clf` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vt_classifier_n_features(clf: *const VtClassifier) -> usize {
    clf.as_ref().map_or(0, |c| c.names.len())
}

/// Name of feature `i`, owned by the handle; null when out of range.
///
/// # Safety
/// `clf` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vt_classifier_feature_name(clf: *const VtClassifier, i: usize) -> *const c_char {
    clf.as_ref()
        .and_then(|c| c.names.get(i))
        .map_or(ptr::null(), |n| n.as_ptr())
}

/// Probability of the positive class for one row of raw (unscaled) feature
/// values in the order given by [`vt_classifier_feature_name`]. `label` is
/// set to 1 when the probability is at least 0.5 and may be null.
///
/// # Safety
/// `values` points to `n_values` doubles; `probability` and `label` (if
/// non-null) point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn vt_classifier_predict(
    clf: *const VtClassifier,
    values: *const f64,
    n_values: usize,
    probability: *mut f64,
    label: *mut u8,
) -> VtStatus {
    guard(|| {
        let clf = clf.as_ref().ok_or_else(|| null("classifier"))?;
        if values.is_null() {
            return Err(null("values"));
        }
        if probability.is_null() {
            return Err(null("probability"));
        }
        if n_values != clf.names.len() {
            return Err(fail(Error::Invalid(format!(
                "expected {} feature values, got {n_values}",
                clf.names.len()
            ))));
        }
        let row = std::slice::from_raw_parts(values, n_values);
        if let Some(i) = row.iter().position(|v| !v.is_finite()) {
            return Err(fail(Error::Invalid(format!(
                "feature {} is not finite",
                clf.model.spec.features[i]
            ))));
        }
        let p = clf.model.probability(row);
        *probability = p;
        if !label.is_null() {
            *label = u8::from(p >= 0.5);
        }
        Ok(())
    })
}
