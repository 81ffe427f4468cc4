use std::collections::BTreeMap;

use crate::corpus::{CorpusStore, VideoRecord};
use crate::medterm::metadata_text;
use crate::textfeat::{extract_text_features, features_of, TextLexicons};
use crate::tsv::Table;
use crate::{Error, Result};

macro_rules! feature_vector {
    (
        numeric { $($num:ident),* $(,)? }
        annotation { $($ann:ident),* $(,)? }
    ) => {
        /// Per-video features. Annotation values are absent for unlabeled
        /// videos; `recommended` is a target only, never a feature.
        #[derive(Debug, Clone, Default, PartialEq)]
        pub struct FeatureVector {
            pub video_id: String,
            $(pub $num: f64,)*
            $(pub $ann: Option<f64>,)*
            pub recommended: Option<f64>,
        }

        /// Every feature name, video-level block first, then metadata, NER
        /// and annotation blocks.
        pub const FEATURE_NAMES: &[&str] = &[$(stringify!($num),)* $(stringify!($ann),)*];

        impl FeatureVector {
            /// The value of a named feature or target. `None` for an absent
            /// annotation; an unknown name is an error.
            pub fn get(&self, name: &str) -> Result<Option<f64>> {
                match name {
                    $(stringify!($num) => Ok(Some(self.$num)),)*
                    $(stringify!($ann) => Ok(self.$ann),)*
                    "recommended" => Ok(self.recommended),
                    other => Err(Error::Invalid(format!("unknown feature {other:?}"))),
                }
            }

            /// Sets a named feature or target; `None` zeroes a numeric field.
            pub fn set(&mut self, name: &str, value: Option<f64>) -> Result<()> {
                match name {
                    $(stringify!($num) => self.$num = value.unwrap_or(0.0),)*
                    $(stringify!($ann) => self.$ann = value,)*
                    "recommended" => self.recommended = value,
                    other => return Err(Error::Invalid(format!("unknown feature column {other:?}"))),
                }
                Ok(())
            }
        }
    };
}

feature_vector! {
    numeric {
        ocr_confidence,
        n_active_verbs_v,
        readability_v,
        n_sentences_v,
        n_shots,
        shot_change_confidence,
        n_summary_words_v,
        transcription_confidence,
        n_transition_words_v,
        n_words_v,
        n_unique_words_v,
        has_title,
        has_description,
        has_tags,
        readability_m,
        n_sentences_m,
        n_words_m,
        n_unique_words_m,
        n_transition_words_m,
        n_summary_words_m,
        n_active_verbs_m,
        duration_s,
        n_unique_medical_terms,
    }
    annotation { medical_info_high, understandable }
}

/// Features that take only the values 0 and 1; the scaler leaves them as is.
pub const BINARY_FEATURES: &[&str] = &[
    "has_title",
    "has_description",
    "has_tags",
    "medical_info_high",
    "understandable",
];

/// Columns written by `featurize`: the video-level and metadata blocks.
pub fn text_feature_names() -> &'static [&'static str] {
    &FEATURE_NAMES[..22]
}

impl FeatureVector {
    pub fn value(&self, name: &str) -> Result<f64> {
        self.get(name)?
            .ok_or_else(|| Error::Invalid(format!("video {} has no value for feature {name}", self.video_id)))
    }
}

fn flag(present: bool) -> f64 {
    if present {
        1.0
    } else {
        0.0
    }
}

/// Video-level features from the transcript and OCR document, and metadata
/// features from the title and description. NER and annotation fields are
/// left empty.
pub fn video_text_features(store: &CorpusStore, video: &VideoRecord, lex: &TextLexicons) -> FeatureVector {
    let id = &video.video_id;
    let transcript_text = store.transcript(id).map(|t| t.text()).unwrap_or_default();
    let v = extract_text_features(&transcript_text, lex);
    let m = features_of(&metadata_text(video), lex);
    let ocr = store.ocr_doc(id);
    FeatureVector {
        video_id: id.clone(),
        ocr_confidence: ocr.map_or(0.0, |o| o.mean_confidence()),
        n_active_verbs_v: v.active_verb_count as f64,
        readability_v: v.readability,
        n_sentences_v: v.sentence_count as f64,
        n_shots: ocr.map_or(0.0, |o| o.shot_count as f64),
        shot_change_confidence: ocr.map_or(0.0, |o| o.shot_change_confidence),
        n_summary_words_v: v.summary_word_count as f64,
        transcription_confidence: store.transcript(id).map_or(0.0, |t| t.overall_confidence()),
        n_transition_words_v: v.transition_word_count as f64,
        n_words_v: v.word_count as f64,
        n_unique_words_v: v.unique_word_count as f64,
        has_title: flag(!video.title.trim().is_empty()),
        has_description: flag(!video.description.trim().is_empty()),
        has_tags: flag(!video.tags.is_empty()),
        readability_m: m.readability,
        n_sentences_m: m.sentence_count as f64,
        n_words_m: m.word_count as f64,
        n_unique_words_m: m.unique_word_count as f64,
        n_transition_words_m: m.transition_word_count as f64,
        n_summary_words_m: m.summary_word_count as f64,
        n_active_verbs_m: m.active_verb_count as f64,
        duration_s: video.duration_s as f64,
        ..Default::default()
    }
}

/// Text features of every video in id order.
pub fn featurize(store: &CorpusStore, lex: &TextLexicons) -> Vec<FeatureVector> {
    store
        .videos()
        .values()
        .map(|v| video_text_features(store, v, lex))
        .collect()
}

/// Joins text features, per-video unique medical term counts and the
/// consolidated labels into one vector per video.
pub fn assemble_features(
    store: &CorpusStore,
    text_features: &[FeatureVector],
    ner_counts: &BTreeMap<String, usize>,
) -> Result<Vec<FeatureVector>> {
    for id in store.labels().keys() {
        if store.video(id).is_none() {
            return Err(Error::Integrity(format!("labeled video {id} has no metadata")));
        }
    }
    let by_id: BTreeMap<&str, &FeatureVector> = text_features.iter().map(|f| (f.video_id.as_str(), f)).collect();
    store
        .videos()
        .keys()
        .map(|id| {
            let mut fv = (*by_id
                .get(id.as_str())
                .ok_or_else(|| Error::Integrity(format!("video {id} has no text features")))?)
            .clone();
            fv.n_unique_medical_terms = *ner_counts
                .get(id)
                .ok_or_else(|| Error::Integrity(format!("video {id} has no medical term count")))?
                as f64;
            let labels = store.label(id);
            fv.medical_info_high = labels.map(|l| f64::from(l.medical_info_high));
            fv.understandable = labels.map(|l| f64::from(l.understandable));
            fv.recommended = labels.map(|l| f64::from(l.recommended));
            Ok(fv)
        })
        .collect()
}

const MISSING: &str = "NA";

/// Writes `video_id` plus the given columns; absent values become `NA`.
pub fn features_to_tsv(rows: &[FeatureVector], columns: &[&str]) -> String {
    let mut table = Table::new(std::iter::once("video_id").chain(columns.iter().copied()));
    for row in rows {
        let mut cells = vec![row.video_id.clone()];
        for c in columns {
            cells.push(match row.get(c).expect("known column") {
                Some(v) => v.to_string(),
                None => MISSING.to_owned(),
            });
        }
        table.push(cells);
    }
    table.to_tsv()
}

/// Columns of the assembled feature matrix: every feature, then the
/// recommendation target.
pub fn matrix_columns() -> Vec<&'static str> {
    FEATURE_NAMES.iter().copied().chain(["recommended"]).collect()
}

/// Parses a feature TSV. Columns not present keep their defaults.
pub fn features_from_tsv(source: &str, text: &str) -> Result<Vec<FeatureVector>> {
    let table = Table::parse(source, text)?;
    if table.header.first().map(String::as_str) != Some("video_id") {
        return Err(Error::Format {
            path: source.to_owned(),
            line: 1,
            message: "first column must be video_id".into(),
        });
    }
    table
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut fv = FeatureVector {
                video_id: row[0].clone(),
                ..Default::default()
            };
            for (name, cell) in table.header.iter().zip(row).skip(1) {
                let value = if cell == MISSING {
                    None
                } else {
                    Some(
                        cell.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .ok_or_else(|| Error::Format {
                                path: source.to_owned(),
                                line: i + 2,
                                message: format!("{name}: {cell:?} is not a number"),
                            })?,
                    )
                };
                fv.set(name, value).map_err(|e| Error::Format {
                    path: source.to_owned(),
                    line: 1,
                    message: e.to_string(),
                })?;
            }
            Ok(fv)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_labels, parse_ocr, parse_transcript, parse_video_metadata};

    fn store() -> CorpusStore {
        let videos = vec![
            parse_video_metadata(
                r#"{"video_id":"v1","title":"Colon cancer screening","description":"First, we explain polyps. Then we show a colonoscopy.","tags":["colon"],"duration":"PT3M28S"}"#,
            )
            .unwrap(),
            parse_video_metadata(r#"{"video_id":"v2","title":"Silent clip"}"#).unwrap(),
        ];
        let transcripts = vec![parse_transcript(
            r#"{"video_id":"v1","segments":[{"text":"The doctor removes polyps.","confidence":0.8}]}"#,
        )
        .unwrap()];
        let ocr = vec![parse_ocr(
            r#"{"video_id":"v1","blocks":[{"text":"a","confidence":0.9},{"text":"b","confidence":0.7}],"shot_count":4,"shot_change_confidence":0.5}"#,
        )
        .unwrap()];
        let labels = vec![parse_labels(
            r#"{"video_id":"v1","medical_info_high":1,"understandable":0,"recommended":1,"annotator_id":"a"}"#,
        )
        .unwrap()];
        CorpusStore::new(videos, transcripts, ocr, labels).unwrap()
    }

    #[test]
    fn names_cover_table_roster() {
        assert_eq!(FEATURE_NAMES.len(), 25);
        assert_eq!(text_feature_names().len(), 22);
        assert_eq!(text_feature_names().last(), Some(&"duration_s"));
    }

    #[test]
    fn populated_video() {
        let store = store();
        let lex = TextLexicons::default();
        let fv = video_text_features(&store, store.video("v1").unwrap(), &lex);
        assert!((fv.ocr_confidence - 0.8).abs() < 1e-12);
        assert_eq!(fv.n_shots, 4.0);
        assert_eq!(fv.shot_change_confidence, 0.5);
        assert_eq!(fv.transcription_confidence, 0.8);
        assert_eq!(fv.n_words_v, 4.0);
        assert_eq!(fv.n_sentences_v, 1.0);
        assert_eq!(fv.n_active_verbs_v, 1.0);
        assert_eq!((fv.has_title, fv.has_description, fv.has_tags), (1.0, 1.0, 1.0));
        // Title, then two description sentences.
        assert_eq!(fv.n_sentences_m, 3.0);
        assert_eq!(fv.n_words_m, 3.0 + 9.0);
        assert_eq!(fv.n_transition_words_m, 2.0);
        assert_eq!(fv.duration_s, 208.0);
    }

    #[test]
    fn silent_video_is_zero() {
        let store = store();
        let fv = video_text_features(&store, store.video("v2").unwrap(), &TextLexicons::default());
        assert_eq!(fv.transcription_confidence, 0.0);
        assert_eq!(fv.n_words_v, 0.0);
        assert_eq!(fv.readability_v, 0.0);
        assert_eq!(fv.has_tags, 0.0);
        assert_eq!(fv.has_description, 0.0);
    }

    #[test]
    fn assemble_and_round_trip() {
        let store = store();
        let text = featurize(&store, &TextLexicons::default());
        let counts = BTreeMap::from([("v1".to_owned(), 3), ("v2".to_owned(), 0)]);
        let rows = assemble_features(&store, &text, &counts).unwrap();
        assert_eq!(rows[0].n_unique_medical_terms, 3.0);
        assert_eq!(rows[0].recommended, Some(1.0));
        assert_eq!(rows[1].understandable, None);
        let tsv = features_to_tsv(&rows, &matrix_columns());
        assert_eq!(features_from_tsv("f", &tsv).unwrap(), rows);

        let missing = BTreeMap::from([("v1".to_owned(), 3)]);
        assert!(assemble_features(&store, &text, &missing).is_err());
    }

    #[test]
    fn bad_cell_is_reported() {
        let err = features_from_tsv("f.tsv", "video_id\tn_shots\nv\tmany\n").unwrap_err();
        assert!(err.to_string().contains("f.tsv:2"));
    }
}
