use std::ops::Range;

/// Lowercased word tokens with sentence boundaries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenizedText {
    pub tokens: Vec<String>,
    /// Token-index ranges, disjoint, ordered, covering every token.
    pub sentences: Vec<Range<usize>>,
    /// Length of the source text in characters.
    pub source_len: usize,
}

impl TokenizedText {
    pub fn sentence_tokens(&self) -> impl Iterator<Item = &[String]> + '_ {
        self.sentences.iter().map(|r| &self.tokens[r.clone()])
    }

    /// Appends `other`, keeping its sentences separate from ours.
    pub fn append(&mut self, other: TokenizedText) {
        let offset = self.tokens.len();
        self.tokens.extend(other.tokens);
        self.sentences
            .extend(other.sentences.into_iter().map(|r| r.start + offset..r.end + offset));
        self.source_len += other.source_len;
    }
}

// Lowercased chunk bodies that end in '.' without ending a sentence.
const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "e.g", "i.e", "fig", "approx", "no",
];

const CLOSERS: &[char] = &['"', '\'', ')', ']', '}', '\u{201d}', '\u{2019}'];

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits a whitespace-free chunk into word tokens. Apostrophes are kept
/// only between word characters (`don't`).
fn chunk_tokens(chunk: &str, out: &mut Vec<String>) {
    let chars: Vec<char> = chunk.chars().collect();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let keep = is_word_char(c)
            || (is_apostrophe(c) && !current.is_empty() && chars.get(i + 1).is_some_and(|&n| is_word_char(n)));
        if keep {
            current.extend(c.to_lowercase());
        } else if !current.is_empty() {
            out.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
}

fn ends_sentence(chunk: &str) -> bool {
    let body = chunk.trim_end_matches(CLOSERS);
    let Some(last) = body.chars().last() else {
        return false;
    };
    match last {
        '!' | '?' => true,
        '.' => {
            let stem = body
                .trim_end_matches(['.', '!', '?'])
                .trim_start_matches(|c: char| !c.is_alphanumeric())
                .to_lowercase();
            // An ellipsis or a bare period still ends the sentence.
            body.ends_with("..") || !ABBREVIATIONS.contains(&stem.as_str())
        }
        _ => false,
    }
}

/// Tokenizes text into lowercase words and sentences.
///
/// Tokens split on whitespace and punctuation. A sentence ends at a chunk
/// whose final character (ignoring closing quotes and brackets) is `.`, `!`
/// or `?`, unless the chunk is a known abbreviation such as `Dr.`. Trailing
/// tokens without a terminator form a final sentence.
pub fn tokenize(text: &str) -> TokenizedText {
    let mut tokens = Vec::new();
    let mut sentences = Vec::new();
    let mut start = 0;
    for chunk in text.split_whitespace() {
        chunk_tokens(chunk, &mut tokens);
        if ends_sentence(chunk) && tokens.len() > start {
            sentences.push(start..tokens.len());
            start = tokens.len();
        }
    }
    if tokens.len() > start {
        sentences.push(start..tokens.len());
    }
    TokenizedText {
        tokens,
        sentences,
        source_len: text.chars().count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_sentences() {
        let t = tokenize("The cat sat. It ran!");
        assert_eq!(t.tokens, vec!["the", "cat", "sat", "it", "ran"]);
        assert_eq!(t.sentences, vec![0..3, 3..5]);
    }

    #[test]
    fn empty_text() {
        let t = tokenize("");
        assert!(t.tokens.is_empty());
        assert!(t.sentences.is_empty());
        assert_eq!(tokenize("  ... !!").sentences.len(), 0);
    }

    #[test]
    fn abbreviation_guard() {
        let t = tokenize("Dr. Smith left.");
        assert_eq!(t.sentences.len(), 1);
        assert_eq!(t.tokens, vec!["dr", "smith", "left"]);
        assert_eq!(tokenize("Use e.g. water. Then rest.").sentences.len(), 2);
    }

    #[test]
    fn punctuation_and_apostrophes() {
        let t = tokenize("Don't skip the prep-day (really)! \"Why?\" she asked");
        assert_eq!(
            t.tokens,
            vec!["don't", "skip", "the", "prep", "day", "really", "why", "she", "asked"]
        );
        assert_eq!(t.sentences, vec![0..6, 6..7, 7..9]);
    }

    #[test]
    fn append_offsets_sentences() {
        let mut a = tokenize("One two.");
        a.append(tokenize("Three"));
        assert_eq!(a.sentences, vec![0..2, 2..3]);
        assert_eq!(a.source_len, 13);
    }

    proptest! {
        #[test]
        fn sentences_partition_tokens(text in ".{0,200}") {
            let t = tokenize(&text);
            let mut next = 0;
            for r in &t.sentences {
                prop_assert_eq!(r.start, next);
                prop_assert!(r.end > r.start);
                next = r.end;
            }
            prop_assert_eq!(next, t.tokens.len());
            for tok in &t.tokens {
                prop_assert!(!tok.is_empty());
                prop_assert!(!tok.chars().any(char::is_whitespace));
            }
        }
    }
}
