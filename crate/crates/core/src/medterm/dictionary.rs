use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::clean::{clean_words, Stopwords};
use super::semtype::SemanticType;
use crate::textfeat::tokenize;
use crate::{Error, Result};

/// Cleaned medical terms mapped to their semantic types.
///
/// Single words are stored after the cleaning policy. Multi-word terms are
/// additionally kept whole as phrases so projection can label entities such
/// as "colon cancer" as one span.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermDictionary {
    words: BTreeMap<String, BTreeSet<SemanticType>>,
    phrases: BTreeMap<String, BTreeSet<SemanticType>>,
    max_phrase_len: usize,
}

impl TermDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, term: &str, ty: SemanticType, stopwords: &Stopwords) {
        for word in clean_words(term, stopwords) {
            self.words.entry(word).or_default().insert(ty);
        }
        let toks = tokenize(term).tokens;
        if toks.len() >= 2 {
            self.max_phrase_len = self.max_phrase_len.max(toks.len());
            self.phrases.entry(toks.join(" ")).or_default().insert(ty);
        }
    }

    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (&'a str, SemanticType)>, stopwords: &Stopwords) -> Self {
        let mut dict = Self::new();
        for (term, ty) in terms {
            dict.insert(term, ty, stopwords);
        }
        dict
    }

    pub fn word_types(&self, word: &str) -> Option<&BTreeSet<SemanticType>> {
        self.words.get(word)
    }

    pub fn phrase_types(&self, phrase: &str) -> Option<&BTreeSet<SemanticType>> {
        self.phrases.get(phrase)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.keys().map(String::as_str)
    }

    pub fn phrases(&self) -> impl Iterator<Item = &str> {
        self.phrases.keys().map(String::as_str)
    }

    pub fn max_phrase_len(&self) -> usize {
        self.max_phrase_len
    }

    /// Number of distinct entries (words and phrases).
    pub fn len(&self) -> usize {
        self.words.len() + self.phrases.keys().filter(|p| !self.words.contains_key(*p)).count()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty() && self.phrases.is_empty()
    }
}

/// What [`load_dictionary`] skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DictionaryReport {
    pub rows: usize,
    pub kept: usize,
    /// Rows whose type is valid but not in the allowed set.
    pub disallowed: usize,
    /// Row-level warnings, e.g. codes outside the known semantic types.
    pub warnings: Vec<String>,
}

/// Reads a `term<TAB>code` file, keeping rows whose semantic type is in
/// `allowed`. Blank lines and `#` comments are ignored.
pub fn load_dictionary(
    path: &Path,
    allowed: &BTreeSet<SemanticType>,
    stopwords: &Stopwords,
) -> Result<(TermDictionary, DictionaryReport)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dictionary(&path.display().to_string(), &text, allowed, stopwords)
}

pub fn parse_dictionary(
    source: &str,
    text: &str,
    allowed: &BTreeSet<SemanticType>,
    stopwords: &Stopwords,
) -> Result<(TermDictionary, DictionaryReport)> {
    let mut dict = TermDictionary::new();
    let mut report = DictionaryReport::default();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let (term, code) = match fields.as_slice() {
            [term, code] if !term.trim().is_empty() && !code.trim().is_empty() => (term.trim(), code.trim()),
            _ => {
                return Err(Error::Format {
                    path: source.to_owned(),
                    line: lineno,
                    message: "expected `term<TAB>semantic-type-code`".into(),
                })
            }
        };
        report.rows += 1;
        match code.parse::<SemanticType>() {
            Err(e) => {
                log::warn!("{source}:{lineno}: {e}; row skipped");
                report.warnings.push(format!("{source}:{lineno}: {e}"));
            }
            Ok(ty) if !allowed.contains(&ty) => report.disallowed += 1,
            Ok(ty) => {
                dict.insert(term, ty, stopwords);
                report.kept += 1;
            }
        }
    }
    Ok((dict, report))
}
