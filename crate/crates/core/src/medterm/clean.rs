use std::collections::{BTreeSet, HashSet};

use crate::data;

/// Lowercase stopword set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn new<I: IntoIterator<Item = S>, S: AsRef<str>>(words: I) -> Self {
        Stopwords(words.into_iter().map(|w| w.as_ref().trim().to_lowercase()).collect())
    }

    pub fn from_text(text: &str) -> Self {
        Stopwords(data::entries(text).collect())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for Stopwords {
    /// The shipped English list.
    fn default() -> Self {
        Self::from_text(data::STOPWORDS)
    }
}

/// Minimum exclusive word length kept by [`clean_terms`].
pub const MIN_WORD_LEN_EXCLUSIVE: usize = 3;

/// Single words of one raw term that survive cleaning, in order.
pub(crate) fn clean_words<'a>(raw: &'a str, stopwords: &'a Stopwords) -> impl Iterator<Item = String> + 'a {
    raw.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .filter(move |w| !stopwords.contains(w) && w.chars().count() > MIN_WORD_LEN_EXCLUSIVE)
}

/// Strips punctuation and symbols, splits terms into single lowercase words,
/// drops stopwords and keeps words longer than three characters.
pub fn clean_terms<S: AsRef<str>>(raw_terms: &[S], stopwords: &Stopwords) -> BTreeSet<String> {
    raw_terms
        .iter()
        .flat_map(|t| clean_words(t.as_ref(), stopwords))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn punctuation_and_length() {
        let sw = Stopwords::default();
        assert_eq!(
            clean_terms(&["bowel preparation (oral)"], &sw),
            set(&["bowel", "oral", "preparation"])
        );
        assert!(clean_terms(&["the of and"], &sw).is_empty());
        assert!(clean_terms(&["ion gap"], &sw).is_empty());
        assert_eq!(clean_terms(&["X-ray; CT/MRI scan"], &sw), set(&["scan"]));
    }

    #[test]
    fn stopword_list_has_no_medical_words() {
        let sw = Stopwords::default();
        assert!(sw.len() > 300);
        for w in ["colon", "cancer", "polyp", "test", "blood", "bowel"] {
            assert!(!sw.contains(w), "{w}");
        }
    }
}
