//! Video corpus ingestion: metadata, transcripts, OCR documents and labels.
//!
//! All inputs are JSON Lines. A [`CorpusStore`] is built once by
//! [`load_corpus`] (or [`CorpusStore::new`]) and is read-only afterwards.

mod duration;
mod load;
pub mod youtube;

use std::collections::HashSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Deserializer, Serialize};

use crate::{Error, Result};

pub use duration::parse_iso8601_duration;
pub use load::{load_corpus, read_jsonl, CorpusPaths, CorpusStore, LoadSummary};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Definition {
    #[default]
    Sd,
    Hd,
}

/// Metadata for one video.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoRecord {
    pub video_id: String,
    #[serde(default)]
    pub channel_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_at: Option<DateTime<Utc>>,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub tags: Vec<String>,
    #[serde(default, alias = "duration", deserialize_with = "de_duration")]
    pub duration_s: u64,
    #[serde(default)]
    pub definition: Definition,
    #[serde(default)]
    pub caption_available: bool,
    // Absent counts stay absent: zero views is a real observation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub view_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub like_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dislike_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment_count: Option<u64>,
}

fn de_duration<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<u64, D::Error> {
    use serde::de::Error as _;
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Seconds(u64),
        Text(String),
    }
    match Raw::deserialize(de) {
        Ok(Raw::Seconds(s)) => Ok(s),
        Ok(Raw::Text(t)) => t
            .trim()
            .parse::<u64>()
            .ok()
            .or_else(|| parse_iso8601_duration(t.trim()))
            .ok_or_else(|| D::Error::custom(format!("invalid duration {t:?}"))),
        Err(_) => Err(D::Error::custom(
            "duration must be non-negative integer seconds or an ISO-8601 duration",
        )),
    }
}

/// One speech-to-text segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptSegment {
    pub text: String,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptDoc {
    pub video_id: String,
    #[serde(default)]
    pub segments: Vec<TranscriptSegment>,
}

impl TranscriptDoc {
    /// Mean segment confidence weighted by segment word count; 0 when the
    /// transcript has no words.
    pub fn overall_confidence(&self) -> f64 {
        let (weighted, words) = self.segments.iter().fold((0.0, 0usize), |(acc, n), seg| {
            let w = seg.text.split_whitespace().count();
            (acc + seg.confidence * w as f64, n + w)
        });
        if words == 0 {
            0.0
        } else {
            (weighted / words as f64).clamp(0.0, 1.0)
        }
    }

    pub fn text(&self) -> String {
        join_text(self.segments.iter().map(|s| s.text.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcrBlock {
    pub text: String,
    pub confidence: f64,
    #[serde(default)]
    pub frame_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcrDoc {
    pub video_id: String,
    #[serde(default)]
    pub blocks: Vec<OcrBlock>,
    #[serde(default)]
    pub shot_count: u64,
    #[serde(default)]
    pub shot_change_confidence: f64,
}

impl OcrDoc {
    /// Mean block confidence, 0 when no text was detected.
    pub fn mean_confidence(&self) -> f64 {
        if self.blocks.is_empty() {
            return 0.0;
        }
        self.blocks.iter().map(|b| b.confidence).sum::<f64>() / self.blocks.len() as f64
    }

    pub fn text(&self) -> String {
        join_text(self.blocks.iter().map(|b| b.text.as_str()))
    }
}

fn join_text<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    parts
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

/// Human annotation of one video. Labels are 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationLabels {
    pub video_id: String,
    #[serde(deserialize_with = "de_binary")]
    pub medical_info_high: u8,
    #[serde(deserialize_with = "de_binary")]
    pub understandable: u8,
    #[serde(deserialize_with = "de_binary")]
    pub recommended: u8,
    #[serde(default)]
    pub annotator_id: String,
}

fn de_binary<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<u8, D::Error> {
    use serde::de::Error as _;
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Bool(bool),
        Int(i64),
    }
    match Raw::deserialize(de) {
        Ok(Raw::Bool(b)) => Ok(u8::from(b)),
        Ok(Raw::Int(v @ (0 | 1))) => Ok(v as u8),
        Ok(Raw::Int(v)) => Err(D::Error::custom(format!("label must be 0 or 1, got {v}"))),
        Err(_) => Err(D::Error::custom("label must be 0, 1, true or false")),
    }
}

/// Returns each distinct id once, in order of first appearance.
pub fn dedupe_ids<S: AsRef<str>>(ids: &[S]) -> Vec<String> {
    let mut seen = HashSet::with_capacity(ids.len());
    ids.iter()
        .map(AsRef::as_ref)
        .filter(|id| seen.insert(*id))
        .map(str::to_owned)
        .collect()
}

/// Deserializes one JSON object, separating syntax errors (with byte
/// offsets) from schema errors.
pub(crate) fn parse_object<T: serde::de::DeserializeOwned>(context: &str, text: &str) -> Result<T> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return Err(Error::schema(
            context,
            "expected one JSON object per line; JSON arrays are not accepted",
        ));
    }
    if !trimmed.is_empty() && !trimmed.starts_with('{') {
        // Let serde report syntax problems; otherwise it is a non-object value.
        if let Err(e) = serde_json::from_str::<serde_json::Value>(text) {
            return Err(Error::from_json(context, text, &e));
        }
        return Err(Error::schema(context, "expected a JSON object"));
    }
    serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => Error::schema(context, e.to_string()),
        _ => Error::from_json(context, text, &e),
    })
}

fn check_unit(context: &str, what: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::schema(context, format!("{what} {value} outside [0, 1]")))
    }
}

fn check_id(context: &str, id: &str) -> Result<()> {
    if id.trim().is_empty() {
        Err(Error::schema(context, "video_id must be non-empty"))
    } else {
        Ok(())
    }
}

pub(crate) fn parse_video_in(context: &str, json_text: &str) -> Result<VideoRecord> {
    let rec: VideoRecord = parse_object(context, json_text)?;
    check_id(context, &rec.video_id)?;
    Ok(rec)
}

/// Parses one video metadata object. `duration_s` (or `duration`) may be
/// integer seconds or an ISO-8601 duration string.
pub fn parse_video_metadata(json_text: &str) -> Result<VideoRecord> {
    parse_video_in("video metadata", json_text)
}

pub(crate) fn parse_transcript_in(context: &str, json_text: &str) -> Result<TranscriptDoc> {
    let doc: TranscriptDoc = parse_object(context, json_text)?;
    check_id(context, &doc.video_id)?;
    for seg in &doc.segments {
        check_unit(context, "segment confidence", seg.confidence)?;
    }
    Ok(doc)
}

pub fn parse_transcript(json_text: &str) -> Result<TranscriptDoc> {
    parse_transcript_in("transcript", json_text)
}

pub(crate) fn parse_ocr_in(context: &str, json_text: &str) -> Result<OcrDoc> {
    let doc: OcrDoc = parse_object(context, json_text)?;
    check_id(context, &doc.video_id)?;
    for block in &doc.blocks {
        check_unit(context, "block confidence", block.confidence)?;
        if !(block.frame_time_s >= 0.0 && block.frame_time_s.is_finite()) {
            return Err(Error::schema(context, "frame_time_s must be a non-negative number"));
        }
    }
    check_unit(context, "shot_change_confidence", doc.shot_change_confidence)?;
    Ok(doc)
}

pub fn parse_ocr(json_text: &str) -> Result<OcrDoc> {
    parse_ocr_in("ocr", json_text)
}

pub(crate) fn parse_labels_in(context: &str, json_text: &str) -> Result<AnnotationLabels> {
    let labels: AnnotationLabels = parse_object(context, json_text)?;
    check_id(context, &labels.video_id)?;
    Ok(labels)
}

pub fn parse_labels(json_text: &str) -> Result<AnnotationLabels> {
    parse_labels_in("labels", json_text)
}

/// Majority vote per label across annotators of one video. An even split
/// resolves to 0.
pub fn consolidate_labels(per_annotator: &[AnnotationLabels]) -> Result<AnnotationLabels> {
    let first = per_annotator
        .first()
        .ok_or_else(|| Error::Invalid("no annotations to consolidate".into()))?;
    if let Some(other) = per_annotator.iter().find(|l| l.video_id != first.video_id) {
        return Err(Error::Invalid(format!(
            "cannot consolidate labels of different videos: {} and {}",
            first.video_id, other.video_id
        )));
    }
    let n = per_annotator.len();
    let vote = |get: fn(&AnnotationLabels) -> u8| {
        let ones = per_annotator.iter().filter(|l| get(l) == 1).count();
        u8::from(2 * ones > n)
    };
    Ok(AnnotationLabels {
        video_id: first.video_id.clone(),
        medical_info_high: vote(|l| l.medical_info_high),
        understandable: vote(|l| l.understandable),
        recommended: vote(|l| l.recommended),
        annotator_id: format!("majority-of-{n}"),
    })
}
