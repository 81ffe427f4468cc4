use std::collections::HashSet;
use std::path::Path;

use super::tokenize::{tokenize, TokenizedText};
use crate::{data, Error, Result};

/// A named set of lowercase single- or multi-word phrases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    pub name: String,
    entries: HashSet<String>,
    max_len: usize,
}

impl Lexicon {
    /// Builds a lexicon; each phrase is normalized through [`tokenize`] so it
    /// matches token sequences produced from running text.
    pub fn new<I, S>(name: impl Into<String>, phrases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut entries = HashSet::new();
        let mut max_len = 0;
        for phrase in phrases {
            let toks = tokenize(phrase.as_ref()).tokens;
            if toks.is_empty() {
                continue;
            }
            max_len = max_len.max(toks.len());
            entries.insert(toks.join(" "));
        }
        Lexicon {
            name: name.into(),
            entries,
            max_len,
        }
    }

    /// Parses the one-phrase-per-line format (`#` starts a comment line).
    pub fn from_text(name: impl Into<String>, text: &str) -> Self {
        Self::new(name, data::entries(text))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok(Self::from_text(name, &text))
    }

    pub fn transition_words() -> Self {
        Self::from_text("transition_words", data::TRANSITION_WORDS)
    }

    pub fn summary_words() -> Self {
        Self::from_text("summary_words", data::SUMMARY_WORDS)
    }

    pub fn active_verbs() -> Self {
        Self::from_text("active_verbs", data::ACTIVE_VERBS)
    }

    pub fn contains(&self, phrase: &str) -> bool {
        self.entries.contains(phrase)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}

/// Counts lexicon phrase occurrences, scanning left to right and taking the
/// longest match at each position; matches never overlap.
pub fn lexicon_count(tok: &TokenizedText, lex: &Lexicon) -> usize {
    let tokens = &tok.tokens;
    let mut count = 0;
    let mut i = 0;
    while i < tokens.len() {
        let longest = (1..=lex.max_len.min(tokens.len() - i))
            .rev()
            .find(|&k| lex.entries.contains(&tokens[i..i + k].join(" ")));
        match longest {
            Some(k) => {
                count += 1;
                i += k;
            }
            None => i += 1,
        }
    }
    count
}

const BE_FORMS: &[&str] = &["am", "is", "are", "was", "were", "be", "been", "being"];

const IRREGULAR_PAST: &[(&str, &str)] = &[
    ("ate", "eat"),
    ("began", "begin"),
    ("bought", "buy"),
    ("brought", "bring"),
    ("built", "build"),
    ("came", "come"),
    ("chose", "choose"),
    ("did", "do"),
    ("drank", "drink"),
    ("felt", "feel"),
    ("found", "find"),
    ("gave", "give"),
    ("got", "get"),
    ("grew", "grow"),
    ("heard", "hear"),
    ("held", "hold"),
    ("kept", "keep"),
    ("knew", "know"),
    ("lost", "lose"),
    ("made", "make"),
    ("met", "meet"),
    ("paid", "pay"),
    ("ran", "run"),
    ("said", "say"),
    ("sat", "sit"),
    ("saw", "see"),
    ("sent", "send"),
    ("slept", "sleep"),
    ("spent", "spend"),
    ("spoke", "speak"),
    ("taught", "teach"),
    ("thought", "think"),
    ("told", "tell"),
    ("took", "take"),
    ("understood", "understand"),
    ("went", "go"),
    ("wrote", "write"),
];

/// Candidate base forms of an inflected token.
fn base_forms(token: &str) -> Vec<String> {
    let mut out = vec![token.to_owned()];
    if let Some(&(_, base)) = IRREGULAR_PAST.iter().find(|(past, _)| *past == token) {
        out.push(base.to_owned());
    }
    if let Some(stem) = token.strip_suffix("ies").or_else(|| token.strip_suffix("ied")) {
        out.push(format!("{stem}y"));
    }
    let mut push_stem = |stem: &str| {
        if stem.len() >= 2 {
            out.push(stem.to_owned());
            out.push(format!("{stem}e"));
            let b = stem.as_bytes();
            // stopped -> stop
            if b.len() >= 3 && b[b.len() - 1] == b[b.len() - 2] {
                out.push(stem[..stem.len() - 1].to_owned());
            }
        }
    };
    for suffix in ["ing", "ed", "es", "s", "d"] {
        if let Some(stem) = token.strip_suffix(suffix) {
            push_stem(stem);
        }
    }
    out
}

/// Counts verbs from `verbs` (after inflection normalization) that are not
/// immediately preceded by a form of "be".
pub fn active_verb_count(tok: &TokenizedText, verbs: &Lexicon) -> usize {
    tok.tokens
        .iter()
        .enumerate()
        .filter(|(i, token)| {
            let after_be = i
                .checked_sub(1)
                .is_some_and(|p| BE_FORMS.contains(&tok.tokens[p].as_str()));
            !after_be && base_forms(token).iter().any(|b| verbs.contains(b))
        })
        .count()
}
