//! CoNLL-style NER corpus: one `token<TAB>tag` per line, a blank line after
//! each sentence, and a `# doc: <id>` line opening each video's sentences.

use std::fmt::Write as _;

use super::project::{BioTag, TaggedSentence};
use crate::{Error, Result};

/// The tagged sentences of one document (video).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerDoc {
    pub id: String,
    pub sentences: Vec<TaggedSentence>,
}

pub fn write_conll(docs: &[NerDoc]) -> String {
    let mut out = String::new();
    for doc in docs {
        let _ = writeln!(out, "# doc: {}", doc.id);
        for sentence in &doc.sentences {
            for (token, tag) in sentence.tokens.iter().zip(&sentence.labels) {
                let _ = writeln!(out, "{token}\t{tag}");
            }
            out.push('\n');
        }
    }
    out
}

/// Parses the format written by [`write_conll`]. Sentences before the first
/// `# doc:` line each form their own anonymous document.
pub fn read_conll(source: &str, text: &str) -> Result<Vec<NerDoc>> {
    let mut docs: Vec<NerDoc> = Vec::new();
    let mut tokens = Vec::new();
    let mut labels = Vec::new();
    let mut anonymous = 0usize;

    fn flush(docs: &mut Vec<NerDoc>, tokens: &mut Vec<String>, labels: &mut Vec<BioTag>, anonymous: &mut usize) {
        if tokens.is_empty() {
            return;
        }
        let sentence = TaggedSentence::new(std::mem::take(tokens), std::mem::take(labels));
        match docs.last_mut() {
            Some(doc) if !doc.id.starts_with("#anon") => doc.sentences.push(sentence),
            _ => {
                *anonymous += 1;
                docs.push(NerDoc {
                    id: format!("#anon{anonymous}"),
                    sentences: vec![sentence],
                });
            }
        }
    }

    for (i, line) in text.lines().enumerate() {
        if let Some(id) = line.strip_prefix("# doc:") {
            flush(&mut docs, &mut tokens, &mut labels, &mut anonymous);
            docs.push(NerDoc {
                id: id.trim().to_owned(),
                sentences: Vec::new(),
            });
            continue;
        }
        if line.trim().is_empty() {
            flush(&mut docs, &mut tokens, &mut labels, &mut anonymous);
            continue;
        }
        let err = |message: String| Error::Format {
            path: source.to_owned(),
            line: i + 1,
            message,
        };
        let (token, tag) = line
            .split_once('\t')
            .ok_or_else(|| err("expected `token<TAB>tag`".into()))?;
        tokens.push(token.to_owned());
        labels.push(tag.trim().parse().map_err(err)?);
    }
    flush(&mut docs, &mut tokens, &mut labels, &mut anonymous);
    Ok(docs)
}
