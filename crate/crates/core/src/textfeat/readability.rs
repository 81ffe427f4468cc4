//! Syllable counting and Flesch-Kincaid grade level.
//!
//! Grade = `0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59`.
//! Unpunctuated transcripts form one long sentence and produce large grades;
//! very short monosyllabic text produces negative grades.

use super::tokenize::{tokenize, TokenizedText};
use crate::{Error, Result};

fn is_vowel(c: char, first: bool) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u') || (c == 'y' && !first)
}

/// Heuristic syllable count: vowel groups, minus a silent final `e` and the
/// silent vowel of `-ed`/`-es` endings. Always at least 1.
pub fn count_syllables(word: &str) -> Result<u32> {
    if word.is_empty() || !word.chars().all(char::is_alphabetic) {
        return Err(Error::Invalid(format!(
            "syllables are defined for non-empty alphabetic words, got {word:?}"
        )));
    }
    let chars: Vec<char> = word.to_lowercase().chars().collect();
    let mut groups = 0u32;
    let mut prev_vowel = false;
    for (i, &c) in chars.iter().enumerate() {
        let v = is_vowel(c, i == 0);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }

    let n = chars.len();
    let at = |back: usize| n.checked_sub(back).map(|i| chars[i]);
    let consonant = |c: Option<char>| c.is_some_and(|c| !is_vowel(c, false));
    let silent = match (at(2), at(1)) {
        // "make", but not "table" or "free"
        (Some(p), Some('e')) => p != 'e' && !(p == 'l' && consonant(at(3))),
        // "removed", but not "tested" or "seeded"
        (Some('e'), Some('d')) => n > 3 && consonant(at(3)) && !matches!(at(3), Some('t' | 'd')),
        // "removes", but not "boxes" or "washes"
        (Some('e'), Some('s')) => {
            n > 3 && consonant(at(3)) && !matches!(at(3), Some('s' | 'x' | 'z' | 'c' | 'g' | 'h'))
        }
        _ => false,
    };
    if silent && groups > 1 {
        groups -= 1;
    }
    Ok(groups.max(1))
}

/// Syllables of a token that may contain digits or apostrophes: alphabetic
/// characters are counted; tokens without letters count as one syllable.
pub(crate) fn token_syllables(token: &str) -> u32 {
    let letters: String = token.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.is_empty() {
        1
    } else {
        count_syllables(&letters).unwrap_or(1)
    }
}

/// Flesch-Kincaid grade of pre-tokenized text.
pub fn readability_of(tok: &TokenizedText) -> Result<f64> {
    let words = tok.tokens.len();
    let sentences = tok.sentences.len();
    if words == 0 || sentences == 0 {
        return Err(Error::UndefinedReadability);
    }
    let syllables: u64 = tok.tokens.iter().map(|t| u64::from(token_syllables(t))).sum();
    let words = words as f64;
    Ok(0.39 * (words / sentences as f64) + 11.8 * (syllables as f64 / words) - 15.59)
}

/// Flesch-Kincaid grade level of `text`.
pub fn readability(text: &str) -> Result<f64> {
    readability_of(&tokenize(text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn syllable_fixtures() {
        let cases = [
            ("cat", 1),
            ("cancer", 2),
            ("colonoscopy", 5),
            ("the", 1),
            ("make", 1),
            ("table", 2),
            ("free", 1),
            ("removes", 2),
            ("removed", 2),
            ("tested", 2),
            ("washes", 2),
            ("yes", 1),
            ("polyp", 2),
            ("Preparation", 4),
        ];
        for (word, want) in cases {
            assert_eq!(count_syllables(word).unwrap(), want, "{word}");
        }
    }

    #[test]
    fn syllables_reject_non_alphabetic() {
        assert!(count_syllables("").is_err());
        assert!(count_syllables("x2").is_err());
        assert!(count_syllables("don't").is_err());
    }

    #[test]
    fn six_word_sentence() {
        let grade = readability("The cat sat on the mat.").unwrap();
        assert!((grade - (-1.45)).abs() < 0.01, "{grade}");
    }

    #[test]
    fn run_on_monosyllables() {
        let text = vec!["cat"; 100].join(" ");
        let grade = readability(&text).unwrap();
        assert!((grade - 35.21).abs() < 0.01, "{grade}");
    }

    #[test]
    fn empty_is_undefined() {
        assert!(matches!(readability(""), Err(Error::UndefinedReadability)));
        assert!(matches!(readability("?!"), Err(Error::UndefinedReadability)));
    }

    proptest! {
        #[test]
        fn at_least_one_syllable(word in "[a-zA-Z]{1,20}") {
            prop_assert!(count_syllables(&word).unwrap() >= 1);
        }

        #[test]
        fn whitespace_and_case_invariant(words in proptest::collection::vec("[a-zA-Z]{1,10}[.!?]?", 1..30), gap in 1usize..4) {
            let base = words.join(" ");
            let spaced = words.join(&" ".repeat(gap)).to_uppercase();
            prop_assert_eq!(readability(&base).unwrap(), readability(&spaced).unwrap());
        }
    }
}
