use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::blstm::{blstm_loss_grad_ids, encode, BlstmParams};
use super::config::TrainConfig;
use super::crf::{crf_loss_grad, CrfParams};
use super::optim::{clip_grad_norm, Adam, ParamSet};
use super::vocab::{build_vocab, Vocab};
use crate::medterm::{BioTag, TaggedSentence};
use crate::{Error, Result};

/// Loss history of one training run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Regularized training loss before the first update (index 0) and after
    /// each epoch.
    pub train_losses: Vec<f64>,
    /// Unregularized loss on the held-out slice, same indexing.
    pub dev_losses: Vec<f64>,
    /// Epoch whose parameters were kept (0 means the initial parameters).
    pub best_epoch: usize,
    pub epochs_run: usize,
    pub n_train: usize,
    pub n_dev: usize,
}

/// Splits off the early-stopping slice. Keeps at least one training
/// sentence; the slice is empty when `dev_fraction` is 0.
fn dev_split(
    corpus: &[TaggedSentence],
    fraction: f64,
    rng: &mut ChaCha8Rng,
) -> (Vec<TaggedSentence>, Vec<TaggedSentence>) {
    let mut items: Vec<TaggedSentence> = corpus.iter().filter(|s| !s.is_empty()).cloned().collect();
    items.shuffle(rng);
    let n_dev = ((fraction * items.len() as f64).round() as usize).min(items.len().saturating_sub(1));
    let dev = items.split_off(items.len() - n_dev);
    (items, dev)
}

/// Mini-batch Adam with gradient clipping and early stopping on `dev`.
/// `loss_grad(params, batch, l2)` returns the mean loss and its gradient.
fn fit<P, F>(
    mut params: P,
    train: &[TaggedSentence],
    dev: &[TaggedSentence],
    config: &TrainConfig,
    rng: &mut ChaCha8Rng,
    loss_grad: F,
) -> Result<(P, TrainReport)>
where
    P: ParamSet,
    F: Fn(&P, &[TaggedSentence], f64) -> Result<(f64, P)>,
{
    let monitor = |p: &P, epoch: usize| -> Result<(f64, f64)> {
        let train_loss = loss_grad(p, train, config.l2)?.0;
        let dev_loss = if dev.is_empty() {
            train_loss
        } else {
            loss_grad(p, dev, 0.0)?.0
        };
        if !train_loss.is_finite() || !dev_loss.is_finite() {
            let loss = if train_loss.is_finite() { dev_loss } else { train_loss };
            return Err(Error::Diverged { epoch, loss });
        }
        Ok((train_loss, dev_loss))
    };

    let mut report = TrainReport {
        n_train: train.len(),
        n_dev: dev.len(),
        ..Default::default()
    };
    let (train_loss, dev_loss) = monitor(&params, 0)?;
    report.train_losses.push(train_loss);
    report.dev_losses.push(dev_loss);

    let mut best = (dev_loss, params.clone(), 0);
    let mut adam = Adam::new(&params, config.learning_rate);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut stale = 0;
    for epoch in 1..=config.epochs {
        order.shuffle(rng);
        for chunk in order.chunks(config.batch_size) {
            let batch: Vec<TaggedSentence> = chunk.iter().map(|&i| train[i].clone()).collect();
            let (loss, mut grad) = loss_grad(&params, &batch, config.l2)?;
            if !loss.is_finite() || !grad.all_finite() {
                return Err(Error::Diverged { epoch, loss });
            }
            clip_grad_norm(&mut grad, config.clip_norm);
            adam.step(&mut params, &grad);
        }
        let (train_loss, dev_loss) = monitor(&params, epoch)?;
        report.train_losses.push(train_loss);
        report.dev_losses.push(dev_loss);
        report.epochs_run = epoch;
        log::debug!("epoch {epoch}: train {train_loss:.6} dev {dev_loss:.6}");
        if dev_loss < best.0 {
            best = (dev_loss, params.clone(), epoch);
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.patience {
                log::info!("early stop after epoch {epoch}; best epoch {}", best.2);
                break;
            }
        }
    }
    report.best_epoch = best.2;
    Ok((best.1, report))
}

fn check_corpus(corpus: &[TaggedSentence], config: &TrainConfig) -> Result<()> {
    config.validate()?;
    if corpus.iter().filter(|s| !s.is_empty()).count() < 2 {
        return Err(Error::Invalid("training needs at least 2 non-empty sentences".into()));
    }
    Ok(())
}

/// Trains the bidirectional LSTM tagger. Deterministic given `config.seed`.
pub fn train_blstm(corpus: &[TaggedSentence], config: &TrainConfig) -> Result<(Vocab, BlstmParams, TrainReport)> {
    check_corpus(corpus, config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (train, dev) = dev_split(corpus, config.dev_fraction, &mut rng);
    let vocab = build_vocab(&train, config.min_count)?;
    let init = BlstmParams::init(vocab.size(), config.d_emb, config.d_hid, BioTag::COUNT, &mut rng);
    let (params, report) = fit(init, &train, &dev, config, &mut rng, |p, batch, l2| {
        let encoded: Vec<_> = batch.iter().map(|s| encode(&vocab, s)).collect();
        blstm_loss_grad_ids(p, &encoded, l2)
    })?;
    Ok((vocab, params, report))
}

/// Trains the CRF baseline by minimizing the regularized negative
/// log-likelihood. Features are collected from the training slice.
pub fn train_crf(corpus: &[TaggedSentence], config: &TrainConfig) -> Result<(CrfParams, TrainReport)> {
    check_corpus(corpus, config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (train, dev) = dev_split(corpus, config.dev_fraction, &mut rng);
    let init = CrfParams::from_corpus(&train);
    fit(init, &train, &dev, config, &mut rng, crf_loss_grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_corpus() -> Vec<TaggedSentence> {
        let make = |s: &str| {
            let mut tokens = Vec::new();
            let mut labels = Vec::new();
            for w in s.split(' ') {
                let (tok, tag) = w.split_once('/').unwrap();
                tokens.push(tok.to_owned());
                labels.push(match tag {
                    "B" => BioTag::B,
                    "I" => BioTag::I,
                    _ => BioTag::O,
                });
            }
            TaggedSentence::new(tokens, labels)
        };
        [
            "the/O colonoscopy/B found/O polyps/B",
            "colon/B cancer/I screening/O saves/O lives/O",
            "ask/O about/O colon/B cancer/I today/O",
            "polyps/B can/O become/O cancer/B",
            "a/O colonoscopy/B is/O safe/O",
            "we/O discuss/O polyps/B and/O colon/B cancer/I",
        ]
        .iter()
        .map(|s| make(s))
        .collect()
    }

    fn small_config(seed: u64) -> TrainConfig {
        TrainConfig {
            seed,
            epochs: 10,
            d_emb: 8,
            d_hid: 8,
            batch_size: 2,
            dev_fraction: 0.0,
            patience: 10,
            learning_rate: 0.05,
            ..Default::default()
        }
    }

    #[test]
    fn blstm_loss_decreases() {
        let (_, _, report) = train_blstm(&toy_corpus(), &small_config(3)).unwrap();
        assert!(report.train_losses[10] < report.train_losses[0]);
    }

    #[test]
    fn crf_loss_decreases() {
        let (_, report) = train_crf(&toy_corpus(), &small_config(3)).unwrap();
        assert!(report.train_losses[10] < report.train_losses[0]);
    }

    #[test]
    fn same_seed_same_parameters() {
        let a = train_blstm(&toy_corpus(), &small_config(5)).unwrap();
        let b = train_blstm(&toy_corpus(), &small_config(5)).unwrap();
        assert_eq!(a.1.flatten(), b.1.flatten());
        let c = train_crf(&toy_corpus(), &small_config(5)).unwrap();
        let d = train_crf(&toy_corpus(), &small_config(5)).unwrap();
        assert_eq!(c.0, d.0);
    }

    #[test]
    fn rejects_tiny_corpus() {
        let corpus = &toy_corpus()[..1];
        assert!(matches!(train_crf(corpus, &small_config(0)), Err(Error::Invalid(_))));
    }

    #[test]
    fn huge_learning_rate_is_reported() {
        let config = TrainConfig {
            learning_rate: f64::MAX,
            clip_norm: f64::MAX,
            ..small_config(1)
        };
        match train_blstm(&toy_corpus(), &config) {
            Err(Error::Diverged { epoch, .. }) => assert!(epoch >= 1),
            other => panic!("expected divergence, got {:?}", other.map(|r| r.2)),
        }
    }
}
