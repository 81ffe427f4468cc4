//! Medical term taggers: a bidirectional LSTM and a linear-chain CRF
//! baseline, trained from scratch on BIO-labeled sentences.

mod blstm;
mod config;
mod crf;
mod metrics;
mod model;
mod optim;
mod train;
mod vocab;

pub use blstm::{blstm_forward, blstm_loss_grad, blstm_loss_grad_ids, BlstmParams, LstmWeights};
pub use config::TrainConfig;
pub use crf::{crf_log_partition, crf_loss_grad, crf_viterbi, token_features, CrfParams, Potentials, N_LABELS};
pub use metrics::{evaluate_spans, evaluate_tagger, TagMetrics};
pub use model::{Arch, Tagger, TaggerModel, TrainMeta, MODEL_FORMAT, MODEL_VERSION};
pub use optim::{clip_grad_norm, Adam, ParamSet};
pub use train::{train_blstm, train_crf, TrainReport};
pub use vocab::{build_vocab, Vocab};

use crate::medterm::{NerDoc, TaggedSentence};
use crate::Result;

/// Trains either architecture and records the document split in the model.
pub fn train_tagger(
    arch: Arch,
    train_docs: &[NerDoc],
    test_doc_ids: Vec<String>,
    config: &TrainConfig,
) -> Result<(TaggerModel, TrainReport)> {
    let corpus: Vec<TaggedSentence> = train_docs.iter().flat_map(|d| d.sentences.iter().cloned()).collect();
    let (tagger, report) = match arch {
        Arch::Blstm => {
            let (vocab, params, report) = train_blstm(&corpus, config)?;
            (Tagger::Blstm { vocab, params }, report)
        }
        Arch::Crf => {
            let (params, report) = train_crf(&corpus, config)?;
            (Tagger::Crf(params), report)
        }
    };
    let meta = TrainMeta {
        seed: config.seed,
        train_docs: train_docs.iter().map(|d| d.id.clone()).collect(),
        test_docs: test_doc_ids,
        train_sentences: corpus.len(),
        best_epoch: report.best_epoch,
        epochs_run: report.epochs_run,
    };
    Ok((
        TaggerModel {
            config: config.clone(),
            meta,
            tagger,
        },
        report,
    ))
}

/// Replaces every sentence's labels with the model's predictions.
pub fn tag_docs(model: &TaggerModel, docs: &[NerDoc]) -> Result<Vec<NerDoc>> {
    docs.iter()
        .map(|doc| {
            let sentences = doc
                .sentences
                .iter()
                .map(|s| Ok(TaggedSentence::new(s.tokens.clone(), model.tag(&s.tokens)?)))
                .collect::<Result<_>>()?;
            Ok(NerDoc {
                id: doc.id.clone(),
                sentences,
            })
        })
        .collect()
}

/// Token-level and span-level scores of `model` against gold documents.
pub fn evaluate_docs(model: &TaggerModel, gold: &[NerDoc]) -> Result<(TagMetrics, TagMetrics)> {
    let predicted = tag_docs(model, gold)?;
    let pred: Vec<_> = predicted
        .iter()
        .flat_map(|d| d.sentences.iter().map(|s| s.labels.clone()))
        .collect();
    let gold: Vec<_> = gold
        .iter()
        .flat_map(|d| d.sentences.iter().map(|s| s.labels.clone()))
        .collect();
    Ok((evaluate_tagger(&pred, &gold)?, evaluate_spans(&pred, &gold)?))
}
