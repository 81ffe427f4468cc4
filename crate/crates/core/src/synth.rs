//! Seeded synthetic data: a small video corpus with a matching term
//! dictionary, and a generator of feature rows from known recommendation
//! coefficients.

use std::fmt::Write as _;
use std::path::Path;

use chrono::{Duration, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Distribution, StandardNormal};

use crate::classify::{sigmoid, FeatureVector, Target, BINARY_FEATURES};
use crate::corpus::{AnnotationLabels, Definition, OcrBlock, OcrDoc, TranscriptDoc, TranscriptSegment, VideoRecord};
use crate::{Error, Result};

/// Dictionary terms with their semantic-type codes.
const TERMS: &[(&str, &str)] = &[
    ("colonoscopy", "diap"),
    ("sigmoidoscopy", "diap"),
    ("polyps", "neop"),
    ("adenoma", "neop"),
    ("carcinoma", "neop"),
    ("metastasis", "neop"),
    ("hemorrhoids", "dsyn"),
    ("diverticulitis", "dsyn"),
    ("anemia", "dsyn"),
    ("constipation", "sosy"),
    ("diarrhea", "sosy"),
    ("cramping", "sosy"),
    ("nausea", "sosy"),
    ("fatigue", "sosy"),
    ("laxative", "orch"),
    ("aspirin", "orch"),
    ("ibuprofen", "orch"),
    ("biopsy", "diap"),
    ("anesthesia", "topp"),
    ("sedation", "topp"),
    ("chemotherapy", "topp"),
    ("polypectomy", "topp"),
    ("rectum", "bpoc"),
    ("abdomen", "bpoc"),
    ("endoscope", "medd"),
    ("gastroenterologist", "prog"),
    ("colon cancer", "neop"),
    ("bowel preparation", "topp"),
    ("rectal bleeding", "sosy"),
    ("fecal occult blood test", "lbpr"),
    ("large intestine", "bpoc"),
    ("inflammatory bowel disease", "dsyn"),
    ("stool sample", "bdsy"),
    ("lynch syndrome", "dsyn"),
];

/// Rows with codes outside the semantic-type set; the loader skips them.
const OFF_TYPE_TERMS: &[(&str, &str)] = &[("happiness", "qlco"), ("weekend", "tmco"), ("friendly", "qlco")];

const FILLER: &[&str] = &[
    "learn",
    "about",
    "your",
    "today",
    "video",
    "doctor",
    "explains",
    "what",
    "happens",
    "patients",
    "should",
    "know",
    "adults",
    "worry",
    "this",
    "helps",
    "prevent",
    "discuss",
    "with",
    "questions",
    "signs",
    "include",
    "watch",
    "simple",
    "steps",
    "clinic",
    "nurse",
    "story",
    "share",
    "family",
    "friends",
    "happiness",
    "weekend",
    "friendly",
    "talk",
    "early",
    "routine",
    "visit",
    "office",
    "home",
    "plan",
    "guide",
    "tips",
    "healthy",
    "habits",
    "ages",
    "women",
    "men",
    "experts",
    "answers",
];

const TRANSCRIPT_OPENERS: &[&str] = &[
    "first",
    "then",
    "next",
    "however",
    "also",
    "finally",
    "in addition",
    "overall",
];

const TRANSCRIPT_VERBS: &[&str] = &[
    "removes",
    "checks",
    "explains",
    "describes",
    "recommends",
    "shows",
    "finds",
    "treats",
];

/// Sentences per video: one title plus this many description sentences.
pub const DESCRIPTION_SENTENCES: usize = 4;

/// Synthetic corpus files, in memory.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub videos: Vec<VideoRecord>,
    pub transcripts: Vec<TranscriptDoc>,
    pub ocr: Vec<OcrDoc>,
    /// Three annotators per video.
    pub labels: Vec<AnnotationLabels>,
    /// `term<TAB>code` rows.
    pub dictionary: String,
}

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items.choose(rng).copied().expect("non-empty list")
}

fn term<R: Rng>(rng: &mut R) -> &'static str {
    TERMS.choose(rng).expect("non-empty").0
}

/// A run of filler words with dictionary terms mixed in.
fn phrase<R: Rng>(rng: &mut R, words: usize, term_rate: f64) -> (Vec<String>, usize) {
    let mut out = Vec::new();
    let mut terms = 0;
    while out.len() < words {
        if rng.gen_bool(term_rate) {
            out.extend(term(rng).split(' ').map(str::to_owned));
            terms += 1;
        } else {
            out.push(pick(rng, FILLER).to_owned());
        }
    }
    (out, terms)
}

fn capitalize(words: &[String]) -> String {
    let text = words.join(" ");
    let mut chars = text.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => text,
    }
}

fn transcript_sentence<R: Rng>(rng: &mut R) -> String {
    let mut words = vec![pick(rng, TRANSCRIPT_OPENERS).to_owned(), "the".to_owned()];
    words.push(pick(rng, &["doctor", "nurse", "team"]).to_owned());
    if rng.gen_bool(0.3) {
        words.push("is".to_owned());
    }
    words.push(pick(rng, TRANSCRIPT_VERBS).to_owned());
    let n = rng.gen_range(3..9);
    words.extend(phrase(rng, n, 0.2).0);
    format!("{}.", capitalize(&words))
}

/// Generates `n_videos` videos with `seed`. Title and description mention
/// dictionary terms; labels depend on the transcript, OCR and term counts.
pub fn synth_corpus(n_videos: usize, seed: u64) -> SynthCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = Utc.with_ymd_and_hms(2018, 1, 1, 12, 0, 0).single().expect("valid date");
    let mut corpus = SynthCorpus {
        videos: Vec::new(),
        transcripts: Vec::new(),
        ocr: Vec::new(),
        labels: Vec::new(),
        dictionary: String::new(),
    };
    for (t, code) in TERMS.iter().chain(OFF_TYPE_TERMS) {
        let _ = writeln!(corpus.dictionary, "{t}\t{code}");
    }

    for i in 0..n_videos {
        let video_id = format!("syn{i:08}");
        let n = rng.gen_range(3..8);
        let (title_words, mut n_terms) = phrase(&mut rng, n, 0.35);
        let mut description = Vec::new();
        for _ in 0..DESCRIPTION_SENTENCES {
            let n = rng.gen_range(6..13);
            let (words, k) = phrase(&mut rng, n, 0.25);
            n_terms += k;
            description.push(format!("{}.", capitalize(&words)));
        }
        let tags = if rng.gen_bool(0.5) {
            vec![term(&mut rng).to_owned(), "health".to_owned()]
        } else {
            Vec::new()
        };
        corpus.videos.push(VideoRecord {
            video_id: video_id.clone(),
            channel_id: format!("chan{:02}", rng.gen_range(0..12)),
            published_at: Some(base + Duration::days(rng.gen_range(0..1500))),
            title: capitalize(&title_words),
            description: description.join(" "),
            tags,
            duration_s: rng.gen_range(30..1800),
            definition: if rng.gen_bool(0.6) {
                Definition::Hd
            } else {
                Definition::Sd
            },
            caption_available: rng.gen_bool(0.4),
            view_count: Some(rng.gen_range(10..500_000)),
            like_count: Some(rng.gen_range(0..5000)),
            dislike_count: rng.gen_bool(0.7).then(|| rng.gen_range(0..200)),
            comment_count: Some(rng.gen_range(0..400)),
        });

        let speech = rng.gen_bool(0.9);
        let mut transcript_conf = 0.0;
        if speech {
            let segments: Vec<TranscriptSegment> = (0..rng.gen_range(2..12))
                .map(|_| TranscriptSegment {
                    text: (0..rng.gen_range(1..4))
                        .map(|_| transcript_sentence(&mut rng))
                        .collect::<Vec<_>>()
                        .join(" "),
                    confidence: rng.gen_range(0.45..0.95),
                })
                .collect();
            let doc = TranscriptDoc {
                video_id: video_id.clone(),
                segments,
            };
            transcript_conf = doc.overall_confidence();
            corpus.transcripts.push(doc);
        }
        let ocr_conf = if rng.gen_bool(0.85) {
            let blocks: Vec<OcrBlock> = (0..rng.gen_range(1..8))
                .map(|k| {
                    let n = rng.gen_range(1..5);
                    OcrBlock {
                        text: capitalize(&phrase(&mut rng, n, 0.3).0),
                        confidence: rng.gen_range(0.6..1.0),
                        frame_time_s: k as f64 * 7.5,
                    }
                })
                .collect();
            let doc = OcrDoc {
                video_id: video_id.clone(),
                blocks,
                shot_count: rng.gen_range(0..15),
                shot_change_confidence: rng.gen_range(0.2..0.8),
            };
            let c = doc.mean_confidence();
            corpus.ocr.push(doc);
            c
        } else {
            0.0
        };

        let medical = rng.gen_bool(sigmoid(0.4 * n_terms as f64 - 1.5));
        let understandable = rng.gen_bool(sigmoid(6.0 * (transcript_conf - 0.6) + 3.0 * (ocr_conf - 0.7)));
        let recommended = rng.gen_bool(sigmoid(
            2.5 * f64::from(u8::from(understandable)) + 1.0 * f64::from(u8::from(medical)) - 2.2,
        ));
        for a in 0..3 {
            let mut vote = |truth: bool| u8::from(truth ^ rng.gen_bool(0.1));
            corpus.labels.push(AnnotationLabels {
                video_id: video_id.clone(),
                medical_info_high: vote(medical),
                understandable: vote(understandable),
                recommended: vote(recommended),
                annotator_id: format!("annotator{}", a + 1),
            });
        }
    }
    corpus
}

fn jsonl<T: serde::Serialize>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| serde_json::to_string(i).expect("serializable") + "\n")
        .collect()
}

impl SynthCorpus {
    /// Writes `videos.jsonl`, `transcripts.jsonl`, `ocr.jsonl`,
    /// `labels.jsonl` and `dictionary.tsv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let files = [
            ("videos.jsonl", jsonl(&self.videos)),
            ("transcripts.jsonl", jsonl(&self.transcripts)),
            ("ocr.jsonl", jsonl(&self.ocr)),
            ("labels.jsonl", jsonl(&self.labels)),
            ("dictionary.tsv", self.dictionary.clone()),
        ];
        for (name, text) in files {
            let path = dir.join(name);
            std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

/// Recommendation coefficients on standardized features. Unlisted
/// features are 0.
pub const RECOMMENDATION_INTERCEPT: f64 = -3.66;
pub const RECOMMENDATION_COEFFICIENTS: &[(&str, f64)] = &[
    ("ocr_confidence", 3.09),
    ("understandable", 1.78),
    ("n_transition_words_v", 1.10),
    ("n_sentences_m", 0.53),
    ("n_active_verbs_v", 0.28),
    ("n_unique_medical_terms", 0.12),
    ("n_words_v", 0.00),
    ("has_description", 0.00),
    ("has_tags", -0.05),
    ("n_sentences_v", -0.06),
    ("n_summary_words_m", -0.15),
    ("readability_m", -0.16),
    ("n_transition_words_m", -0.31),
    ("n_words_m", -0.43),
    ("n_unique_words_m", -0.43),
    ("n_active_verbs_m", -0.44),
    ("shot_change_confidence", -0.45),
    ("has_title", -0.45),
    ("n_shots", -0.46),
    ("n_summary_words_v", -0.51),
    ("readability_v", -0.54),
    ("duration_s", -0.68),
    ("n_unique_words_v", -0.81),
    ("transcription_confidence", -0.88),
    ("medical_info_high", 0.00),
];

pub fn recommendation_coefficient(name: &str) -> f64 {
    RECOMMENDATION_COEFFICIENTS
        .iter()
        .find(|(n, _)| *n == name)
        .map_or(0.0, |(_, b)| *b)
}

/// `n` feature rows drawn independently (continuous features standard
/// normal, binary features Bernoulli(0.5)) with `recommended` sampled from
/// the logistic model above.
pub fn simulate_recommendation(n: usize, seed: u64) -> Vec<FeatureVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coin = Bernoulli::new(0.5).expect("valid probability");
    let features = Target::Recommendation.features();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut fv = FeatureVector {
            video_id: format!("sim{i:08}"),
            ..Default::default()
        };
        let mut eta = RECOMMENDATION_INTERCEPT;
        for name in features {
            let v = if BINARY_FEATURES.contains(name) {
                f64::from(u8::from(coin.sample(&mut rng)))
            } else {
                StandardNormal.sample(&mut rng)
            };
            eta += recommendation_coefficient(name) * v;
            fv.set(name, Some(v)).expect("known feature");
        }
        fv.recommended = Some(f64::from(u8::from(rng.gen_bool(sigmoid(eta)))));
        rows.push(fv);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medterm::metadata_sentences;

    #[test]
    fn same_seed_same_corpus() {
        let a = synth_corpus(5, 11);
        let b = synth_corpus(5, 11);
        assert_eq!(a.videos, b.videos);
        assert_eq!(a.labels, b.labels);
        assert_ne!(synth_corpus(5, 12).videos, a.videos);
    }

    #[test]
    fn five_sentences_per_video() {
        let c = synth_corpus(20, 3);
        for v in &c.videos {
            assert_eq!(v.video_id.len(), 11);
            assert_eq!(metadata_sentences(v).len(), 1 + DESCRIPTION_SENTENCES);
        }
        assert_eq!(c.labels.len(), 60);
    }

    #[test]
    fn simulation_covers_every_feature() {
        let rows = simulate_recommendation(50, 1);
        assert_eq!(rows.len(), 50);
        let positives = rows.iter().filter(|r| r.recommended == Some(1.0)).count();
        assert!(positives > 0 && positives < 50);
        assert!(rows.iter().all(|r| r.has_title == 0.0 || r.has_title == 1.0));
        assert!(rows.iter().any(|r| r.ocr_confidence < 0.0));
    }
}
