//! Deterministic text statistics used as classifier features.

mod lexicon;
mod readability;
mod tokenize;

use std::collections::HashSet;

pub use lexicon::{active_verb_count, lexicon_count, Lexicon};
pub use readability::{count_syllables, readability, readability_of};
pub use tokenize::{tokenize, TokenizedText};

/// Counts and readability of one text.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TextFeatures {
    pub word_count: usize,
    pub unique_word_count: usize,
    pub sentence_count: usize,
    pub transition_word_count: usize,
    pub summary_word_count: usize,
    pub active_verb_count: usize,
    /// Flesch-Kincaid grade; 0 when `readability_defined` is false.
    pub readability: f64,
    pub readability_defined: bool,
}

/// The three lexicons feature extraction needs.
#[derive(Debug, Clone)]
pub struct TextLexicons {
    pub transition: Lexicon,
    pub summary: Lexicon,
    pub verbs: Lexicon,
}

impl Default for TextLexicons {
    fn default() -> Self {
        TextLexicons {
            transition: Lexicon::transition_words(),
            summary: Lexicon::summary_words(),
            verbs: Lexicon::active_verbs(),
        }
    }
}

/// Features of already tokenized text.
pub fn features_of(tok: &TokenizedText, lex: &TextLexicons) -> TextFeatures {
    let unique: HashSet<&str> = tok.tokens.iter().map(String::as_str).collect();
    // Silent videos have no text; they get zero features rather than an error.
    let (readability, readability_defined) = match readability_of(tok) {
        Ok(grade) => (grade, true),
        Err(_) => (0.0, false),
    };
    TextFeatures {
        word_count: tok.tokens.len(),
        unique_word_count: unique.len(),
        sentence_count: tok.sentences.len(),
        transition_word_count: lexicon_count(tok, &lex.transition),
        summary_word_count: lexicon_count(tok, &lex.summary),
        active_verb_count: active_verb_count(tok, &lex.verbs),
        readability,
        readability_defined,
    }
}

pub fn extract_text_features(text: &str, lex: &TextLexicons) -> TextFeatures {
    features_of(&tokenize(text), lex)
}
