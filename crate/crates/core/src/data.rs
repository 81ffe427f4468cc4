//! Word lists shipped with the crate. Each can be replaced by a user file
//! with the same one-entry-per-line format.

/// Search keywords used to collect the corpus.
pub const KEYWORDS: &str = include_str!("../data/keywords.txt");
pub const STOPWORDS: &str = include_str!("../data/stopwords.txt");
pub const TRANSITION_WORDS: &str = include_str!("../data/transition_words.txt");
pub const SUMMARY_WORDS: &str = include_str!("../data/summary_words.txt");
pub const ACTIVE_VERBS: &str = include_str!("../data/active_verbs.txt");

/// Iterates the entries of a word-list file: trimmed, lowercased, skipping
/// blank lines and `#` comments.
pub fn entries(text: &str) -> impl Iterator<Item = String> + '_ {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
}

pub fn keywords() -> Vec<String> {
    entries(KEYWORDS).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keyword_list_is_complete() {
        let kw = keywords();
        assert_eq!(kw.len(), 26);
        assert!(kw.contains(&"colonoscopy pillcam".to_string()));
        assert_eq!(crate::corpus::dedupe_ids(&kw).len(), kw.len());
    }

    #[test]
    fn comments_and_blanks_skipped() {
        let got: Vec<_> = entries("# c\n\n  Foo Bar \nbaz").collect();
        assert_eq!(got, vec!["foo bar", "baz"]);
    }
}
