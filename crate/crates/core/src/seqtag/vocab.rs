use std::collections::HashMap;

use crate::medterm::TaggedSentence;
use crate::{Error, Result};

/// Word to dense id map. Id 0 is the unknown word, id 1 is padding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocab {
    pub const UNK: usize = 0;
    pub const PAD: usize = 1;
    pub const UNK_TOKEN: &'static str = "<unk>";
    pub const PAD_TOKEN: &'static str = "<pad>";

    /// Rebuilds a vocabulary from its words in id order.
    pub fn from_words(words: Vec<String>) -> Result<Self> {
        if words.first().map(String::as_str) != Some(Self::UNK_TOKEN)
            || words.get(1).map(String::as_str) != Some(Self::PAD_TOKEN)
        {
            return Err(Error::Model("vocabulary must start with <unk>, <pad>".into()));
        }
        let index: HashMap<String, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        if index.len() != words.len() {
            return Err(Error::Model("vocabulary contains duplicate words".into()));
        }
        Ok(Vocab { words, index })
    }

    pub fn id(&self, word: &str) -> usize {
        self.index
            .get(word)
            .or_else(|| self.index.get(&word.to_lowercase()))
            .copied()
            .unwrap_or(Self::UNK)
    }

    pub fn ids(&self, tokens: &[String]) -> Vec<usize> {
        tokens.iter().map(|t| self.id(t)).collect()
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }
}

/// Words seen at least `min_count` times (lowercased), ordered by frequency
/// descending then lexicographically; rarer words map to `<unk>`.
pub fn build_vocab(corpus: &[TaggedSentence], min_count: usize) -> Result<Vocab> {
    if corpus.is_empty() {
        return Err(Error::Invalid("cannot build a vocabulary from an empty corpus".into()));
    }
    let mut counts: HashMap<String, usize> = HashMap::new();
    for sentence in corpus {
        for token in &sentence.tokens {
            *counts.entry(token.to_lowercase()).or_default() += 1;
        }
    }
    let mut kept: Vec<(String, usize)> = counts
        .into_iter()
        .filter(|(w, c)| *c >= min_count.max(1) && w != Vocab::UNK_TOKEN && w != Vocab::PAD_TOKEN)
        .collect();
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let words = [Vocab::UNK_TOKEN.to_owned(), Vocab::PAD_TOKEN.to_owned()]
        .into_iter()
        .chain(kept.into_iter().map(|(w, _)| w))
        .collect();
    Vocab::from_words(words)
}
