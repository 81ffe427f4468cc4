//! Medical term dictionary, term cleaning and BIO label projection.

mod clean;
mod conll;
mod dictionary;
mod project;
mod semtype;

pub use clean::{clean_terms, Stopwords, MIN_WORD_LEN_EXCLUSIVE};
pub use conll::{read_conll, write_conll, NerDoc};
pub use dictionary::{load_dictionary, parse_dictionary, DictionaryReport, TermDictionary};
pub use project::{
    entity_spans, is_well_formed, project_labels, repair_bio, unique_medical_terms, BioTag, ProjectionMode,
    TaggedSentence,
};
pub use semtype::{SemanticType, UnknownSemanticType};

use crate::corpus::{CorpusStore, VideoRecord};
use crate::textfeat::{tokenize, TokenizedText};

/// Title and description of a video, with the title as its own sentence.
pub fn metadata_text(video: &VideoRecord) -> TokenizedText {
    let mut tok = tokenize(&video.title);
    tok.append(tokenize(&video.description));
    tok
}

/// Token lists of every sentence in the video's title and description.
pub fn metadata_sentences(video: &VideoRecord) -> Vec<Vec<String>> {
    let tok = metadata_text(video);
    tok.sentence_tokens().map(<[String]>::to_vec).collect()
}

/// Projects the dictionary onto each video's metadata sentences, one
/// document per video in id order.
pub fn build_ner_corpus(store: &CorpusStore, dict: &TermDictionary, mode: ProjectionMode) -> Vec<NerDoc> {
    store
        .videos()
        .values()
        .map(|video| NerDoc {
            id: video.video_id.clone(),
            sentences: project_labels(dict, &metadata_sentences(video), mode),
        })
        .collect()
}
