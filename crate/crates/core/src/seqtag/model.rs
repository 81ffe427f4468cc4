//! Versioned JSON model files for both taggers.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::blstm::{blstm_forward, BlstmParams, LstmWeights};
use super::config::TrainConfig;
use super::crf::{crf_viterbi, CrfParams, N_LABELS};
use super::optim::ParamSet;
use super::vocab::Vocab;
use crate::medterm::{repair_bio, BioTag};
use crate::{Error, Result};

pub const MODEL_FORMAT: &str = "vidtriage-tagger";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Arch {
    Blstm,
    Crf,
}

impl Arch {
    pub fn as_str(self) -> &'static str {
        match self {
            Arch::Blstm => "blstm",
            Arch::Crf => "crf",
        }
    }
}

impl std::fmt::Display for Arch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tagger {
    Blstm { vocab: Vocab, params: BlstmParams },
    Crf(CrfParams),
}

/// Where the training data came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainMeta {
    pub seed: u64,
    pub train_docs: Vec<String>,
    pub test_docs: Vec<String>,
    pub train_sentences: usize,
    pub best_epoch: usize,
    pub epochs_run: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaggerModel {
    pub config: TrainConfig,
    pub meta: TrainMeta,
    pub tagger: Tagger,
}

#[derive(Serialize, Deserialize)]
struct ParamEntry {
    name: String,
    shape: Vec<usize>,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    arch: Arch,
    config: TrainConfig,
    train_meta: TrainMeta,
    labels: Vec<BioTag>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    vocab: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    features: Vec<String>,
    params: Vec<ParamEntry>,
}

fn entry(name: &str, shape: &[usize], data: &[f64]) -> ParamEntry {
    ParamEntry {
        name: name.to_owned(),
        shape: shape.to_vec(),
        data: data.to_vec(),
    }
}

fn take(params: &mut Vec<ParamEntry>, name: &str, shape: &[usize]) -> Result<Vec<f64>> {
    let pos = params
        .iter()
        .position(|p| p.name == name)
        .ok_or_else(|| Error::Model(format!("missing parameter {name}")))?;
    let p = params.remove(pos);
    if p.shape != shape || p.data.len() != shape.iter().product::<usize>() {
        return Err(Error::Model(format!(
            "parameter {name} has shape {:?} with {} values, expected {shape:?}",
            p.shape,
            p.data.len()
        )));
    }
    Ok(p.data)
}

impl TaggerModel {
    pub fn arch(&self) -> Arch {
        match self.tagger {
            Tagger::Blstm { .. } => Arch::Blstm,
            Tagger::Crf(_) => Arch::Crf,
        }
    }

    /// Predicted tags, repaired to well-formed BIO.
    pub fn tag(&self, tokens: &[String]) -> Result<Vec<BioTag>> {
        if tokens.is_empty() {
            return Ok(Vec::new());
        }
        let mut tags = match &self.tagger {
            Tagger::Blstm { vocab, params } => blstm_forward(params, &vocab.ids(tokens))?
                .iter()
                .map(|lp| {
                    // First maximum wins, so ties go to the lower label id.
                    let best = (1..lp.len()).fold(0, |b, l| if lp[l] > lp[b] { l } else { b });
                    BioTag::ALL[best]
                })
                .collect(),
            Tagger::Crf(params) => crf_viterbi(params, tokens).0,
        };
        repair_bio(&mut tags);
        Ok(tags)
    }

    pub fn to_json(&self) -> String {
        let (vocab, features, params) = match &self.tagger {
            Tagger::Blstm { vocab, params: p } => {
                let (v, e, h, l) = (p.vocab_size, p.d_emb, p.d_hid, p.n_labels);
                let entries = vec![
                    entry("embedding", &[v, e], &p.embedding),
                    entry("forward.w", &[4 * h, e + h], &p.forward.w),
                    entry("forward.b", &[4 * h], &p.forward.b),
                    entry("backward.w", &[4 * h, e + h], &p.backward.w),
                    entry("backward.b", &[4 * h], &p.backward.b),
                    entry("out.w", &[l, 2 * h], &p.out_w),
                    entry("out.b", &[l], &p.out_b),
                ];
                (vocab.words().to_vec(), Vec::new(), entries)
            }
            Tagger::Crf(p) => {
                let entries = vec![
                    entry("emission", &[p.features().len(), N_LABELS], &p.emission),
                    entry("transition", &[N_LABELS, N_LABELS], &p.transition),
                ];
                (Vec::new(), p.features().to_vec(), entries)
            }
        };
        let file = ModelFile {
            format: MODEL_FORMAT.to_owned(),
            version: MODEL_VERSION,
            arch: self.arch(),
            config: self.config.clone(),
            train_meta: self.meta.clone(),
            labels: BioTag::ALL.to_vec(),
            vocab,
            features,
            params,
        };
        let mut text = serde_json::to_string_pretty(&file).expect("model serializes");
        text.push('\n');
        text
    }

    pub fn from_json(context: &str, text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::from_json(context, text, &e))?;
        if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
            return Err(Error::Model(format!(
                "{context}: expected {MODEL_FORMAT} version {MODEL_VERSION}, found {} version {}",
                file.format, file.version
            )));
        }
        if file.labels != BioTag::ALL {
            return Err(Error::Model(format!("{context}: unexpected label set")));
        }
        let mut params = file.params;
        let tagger = match file.arch {
            Arch::Blstm => {
                let vocab = Vocab::from_words(file.vocab)?;
                let shape = params
                    .iter()
                    .find(|p| p.name == "forward.w")
                    .map(|p| p.shape.clone())
                    .unwrap_or_default();
                let [four_h, e_plus_h] = shape[..] else {
                    return Err(Error::Model(format!("{context}: bad forward.w shape {shape:?}")));
                };
                let h = four_h / 4;
                let e = e_plus_h.checked_sub(h).filter(|_| four_h % 4 == 0 && h > 0);
                let Some(e) = e else {
                    return Err(Error::Model(format!("{context}: bad forward.w shape {shape:?}")));
                };
                let (v, l) = (vocab.size(), BioTag::COUNT);
                let p = BlstmParams {
                    vocab_size: v,
                    d_emb: e,
                    d_hid: h,
                    n_labels: l,
                    embedding: take(&mut params, "embedding", &[v, e])?,
                    forward: LstmWeights {
                        w: take(&mut params, "forward.w", &[4 * h, e + h])?,
                        b: take(&mut params, "forward.b", &[4 * h])?,
                    },
                    backward: LstmWeights {
                        w: take(&mut params, "backward.w", &[4 * h, e + h])?,
                        b: take(&mut params, "backward.b", &[4 * h])?,
                    },
                    out_w: take(&mut params, "out.w", &[l, 2 * h])?,
                    out_b: take(&mut params, "out.b", &[l])?,
                };
                p.check_shapes()?;
                if !p.all_finite() {
                    return Err(Error::Model(format!("{context}: non-finite parameter")));
                }
                Tagger::Blstm { vocab, params: p }
            }
            Arch::Crf => {
                let f = file.features.len();
                let emission = take(&mut params, "emission", &[f, N_LABELS])?;
                let transition = take(&mut params, "transition", &[N_LABELS, N_LABELS])?;
                Tagger::Crf(CrfParams::from_parts(file.features, emission, transition)?)
            }
        };
        if let Some(extra) = params.first() {
            return Err(Error::Model(format!("{context}: unexpected parameter {}", extra.name)));
        }
        Ok(TaggerModel {
            config: file.config,
            meta: file.train_meta,
            tagger,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&path.display().to_string(), &text)
    }
}
