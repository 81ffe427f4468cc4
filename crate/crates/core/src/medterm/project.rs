use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dictionary::TermDictionary;

/// BIO tag over the single entity class `MED`. The numeric order (O, B, I)
/// is the label id order used by the taggers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BioTag {
    #[serde(rename = "O")]
    O = 0,
    #[serde(rename = "B-MED")]
    B = 1,
    #[serde(rename = "I-MED")]
    I = 2,
}

impl BioTag {
    pub const ALL: [BioTag; 3] = [BioTag::O, BioTag::B, BioTag::I];
    pub const COUNT: usize = 3;

    pub fn id(self) -> usize {
        self as usize
    }

    pub fn from_id(id: usize) -> Option<BioTag> {
        Self::ALL.get(id).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BioTag::O => "O",
            BioTag::B => "B-MED",
            BioTag::I => "I-MED",
        }
    }

    pub fn is_entity(self) -> bool {
        self != BioTag::O
    }
}

impl fmt::Display for BioTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BioTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "O" => Ok(BioTag::O),
            "B-MED" => Ok(BioTag::B),
            "I-MED" => Ok(BioTag::I),
            other => Err(format!("unknown tag {other:?}")),
        }
    }
}

/// Tokens with one BIO tag each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedSentence {
    pub tokens: Vec<String>,
    pub labels: Vec<BioTag>,
}

impl TaggedSentence {
    pub fn new(tokens: Vec<String>, labels: Vec<BioTag>) -> Self {
        assert_eq!(tokens.len(), labels.len(), "one label per token");
        TaggedSentence { tokens, labels }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Lowercased surface forms of complete entity spans.
    pub fn spans(&self) -> Vec<String> {
        entity_spans(&self.labels)
            .into_iter()
            .map(|r| self.tokens[r].join(" ").to_lowercase())
            .collect()
    }
}

/// `true` when no `I-MED` starts a sentence or follows `O`.
pub fn is_well_formed(labels: &[BioTag]) -> bool {
    let mut prev = BioTag::O;
    for &tag in labels {
        if tag == BioTag::I && prev == BioTag::O {
            return false;
        }
        prev = tag;
    }
    true
}

/// Turns every illegal `I-MED` (at sentence start or after `O`) into `B-MED`.
pub fn repair_bio(labels: &mut [BioTag]) {
    let mut prev = BioTag::O;
    for tag in labels.iter_mut() {
        if *tag == BioTag::I && prev == BioTag::O {
            *tag = BioTag::B;
        }
        prev = *tag;
    }
}

/// Token ranges of entity spans. Assumes well-formed input; a stray `I-MED`
/// opens a new span.
pub fn entity_spans(labels: &[BioTag]) -> Vec<std::ops::Range<usize>> {
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &tag) in labels.iter().enumerate() {
        match tag {
            BioTag::B => {
                if let Some(s) = start.take() {
                    spans.push(s..i);
                }
                start = Some(i);
            }
            BioTag::I => {
                start.get_or_insert(i);
            }
            BioTag::O => {
                if let Some(s) = start.take() {
                    spans.push(s..i);
                }
            }
        }
    }
    if let Some(s) = start {
        spans.push(s..labels.len());
    }
    spans
}

/// Whether projection matches whole multi-word phrases or only single words.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionMode {
    #[default]
    Phrase,
    Word,
}

/// Labels each sentence by longest-match, left-to-right, non-overlapping
/// dictionary lookup. Matched spans become `B-MED I-MED*`.
pub fn project_labels<S: AsRef<[String]>>(
    dict: &TermDictionary,
    sentences: &[S],
    mode: ProjectionMode,
) -> Vec<TaggedSentence> {
    sentences
        .iter()
        .map(|s| project_sentence(dict, s.as_ref(), mode))
        .collect()
}

fn project_sentence(dict: &TermDictionary, tokens: &[String], mode: ProjectionMode) -> TaggedSentence {
    let lower: Vec<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut labels = vec![BioTag::O; tokens.len()];
    let max_len = match mode {
        ProjectionMode::Phrase => dict.max_phrase_len(),
        ProjectionMode::Word => 1,
    };
    let mut i = 0;
    while i < lower.len() {
        let longest = (2..=max_len.min(lower.len() - i))
            .rev()
            .find(|&k| dict.phrase_types(&lower[i..i + k].join(" ")).is_some())
            .or_else(|| dict.word_types(&lower[i]).map(|_| 1));
        match longest {
            Some(k) => {
                labels[i] = BioTag::B;
                labels[i + 1..i + k].fill(BioTag::I);
                i += k;
            }
            None => i += 1,
        }
    }
    TaggedSentence {
        tokens: tokens.to_vec(),
        labels,
    }
}

/// Number of distinct (case-insensitive) entity surface forms.
pub fn unique_medical_terms(tagged: &[TaggedSentence]) -> usize {
    tagged
        .iter()
        .flat_map(TaggedSentence::spans)
        .collect::<HashSet<_>>()
        .len()
}

#[cfg(test)]
mod tests {
    use super::super::{SemanticType, Stopwords};
    use super::*;
    use proptest::prelude::*;
    use BioTag::{B, I, O};

    fn dict(terms: &[&str]) -> TermDictionary {
        TermDictionary::from_terms(terms.iter().map(|t| (*t, SemanticType::Dsyn)), &Stopwords::default())
    }

    fn sent(s: &str) -> Vec<String> {
        s.split(' ').map(str::to_owned).collect()
    }

    #[test]
    fn longest_match_projection() {
        let d = dict(&["colonoscopy", "colon cancer"]);
        let out = project_labels(
            &d,
            &[sent("colonoscopy screening detects colon cancer")],
            ProjectionMode::Phrase,
        );
        assert_eq!(out[0].labels, vec![B, O, O, B, I]);
    }

    #[test]
    fn no_terms_all_outside() {
        let d = dict(&["colonoscopy"]);
        let out = project_labels(&d, &[sent("we went for a walk")], ProjectionMode::Phrase);
        assert!(out[0].labels.iter().all(|&t| t == O));
    }

    #[test]
    fn overlapping_candidates() {
        let d = dict(&["colon", "colon cancer"]);
        let out = project_labels(&d, &[sent("colon cancer risk")], ProjectionMode::Phrase);
        assert_eq!(out[0].labels, vec![B, I, O]);
        assert_eq!(out[0].spans(), vec!["colon cancer"]);
        let words = project_labels(&d, &[sent("colon cancer risk")], ProjectionMode::Word);
        assert_eq!(words[0].labels, vec![B, B, O]);
    }

    #[test]
    fn distinct_span_count() {
        let a = TaggedSentence::new(sent("colon cancer and colonoscopy"), vec![B, I, O, B]);
        let b = TaggedSentence::new(sent("Colon Cancer"), vec![B, I]);
        assert_eq!(unique_medical_terms(&[a, b]), 2);
        assert_eq!(unique_medical_terms(&[]), 0);
    }

    #[test]
    fn repair_fixes_stray_inside() {
        let mut tags = vec![I, I, O, I, B, I];
        assert!(!is_well_formed(&tags));
        repair_bio(&mut tags);
        assert_eq!(tags, vec![B, I, O, B, B, I]);
        assert!(is_well_formed(&tags));
    }

    #[test]
    fn tag_strings() {
        for t in BioTag::ALL {
            assert_eq!(t.as_str().parse::<BioTag>().unwrap(), t);
            assert_eq!(BioTag::from_id(t.id()), Some(t));
        }
    }

    const VOCAB: &[&str] = &[
        "colon", "cancer", "polyp", "bowel", "prep", "the", "and", "blood", "test", "rectal",
    ];

    proptest! {
        #[test]
        fn projection_is_well_formed_and_sound(
            terms in proptest::collection::vec(proptest::collection::vec(0usize..VOCAB.len(), 1..4), 0..8),
            sentences in proptest::collection::vec(proptest::collection::vec(0usize..VOCAB.len(), 0..12), 1..5),
        ) {
            let terms: Vec<String> = terms.iter().map(|t| t.iter().map(|&i| VOCAB[i]).collect::<Vec<_>>().join(" ")).collect();
            let d = dict(&terms.iter().map(String::as_str).collect::<Vec<_>>());
            let sents: Vec<Vec<String>> = sentences.iter().map(|s| s.iter().map(|&i| VOCAB[i].to_owned()).collect()).collect();
            for tagged in project_labels(&d, &sents, ProjectionMode::Phrase) {
                prop_assert!(is_well_formed(&tagged.labels));
                for span in tagged.spans() {
                    prop_assert!(d.phrase_types(&span).is_some() || d.word_types(&span).is_some(), "{}", span);
                }
            }
        }

        #[test]
        fn repaired_labels_are_well_formed(ids in proptest::collection::vec(0usize..3, 0..30)) {
            let mut tags: Vec<BioTag> = ids.into_iter().map(|i| BioTag::from_id(i).unwrap()).collect();
            repair_bio(&mut tags);
            prop_assert!(is_well_formed(&tags));
        }

        #[test]
        fn unique_terms_order_invariant(seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut order: Vec<usize> = (0..4).collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let sents = vec![
                TaggedSentence::new(sent("colon cancer"), vec![B, I]),
                TaggedSentence::new(sent("polyp here"), vec![B, O]),
                TaggedSentence::new(sent("colon cancer again"), vec![B, I, O]),
                TaggedSentence::new(sent("blood test"), vec![B, I]),
            ];
            let permuted: Vec<_> = order.iter().map(|&i| sents[i].clone()).collect();
            prop_assert_eq!(unique_medical_terms(&sents), unique_medical_terms(&permuted));
        }
    }
}
