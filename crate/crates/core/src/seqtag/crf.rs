//! Linear-chain CRF over the three BIO labels.
//!
//! The score of a label sequence `y` for tokens `x` is
//! `Σ_t Σ_{f ∈ F(x, t)} w[f, y_t] + Σ_{t>0} T[y_{t-1}, y_t]`. Inference uses
//! the forward algorithm (log-partition), forward-backward (marginals) and
//! Viterbi (argmax), all in log space.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashMap};

use super::optim::ParamSet;
use crate::medterm::{BioTag, TaggedSentence};
use crate::{Error, Result};

pub const N_LABELS: usize = BioTag::COUNT;

/// Per-position label scores plus the label transition matrix of one
/// sentence. All CRF inference routines work on this form.
#[derive(Debug, Clone, PartialEq)]
pub struct Potentials {
    pub emissions: Vec<[f64; N_LABELS]>,
    pub transitions: [[f64; N_LABELS]; N_LABELS],
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

impl Potentials {
    pub fn len(&self) -> usize {
        self.emissions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emissions.is_empty()
    }

    pub fn score(&self, labels: &[usize]) -> f64 {
        let mut s = 0.0;
        for (t, &y) in labels.iter().enumerate() {
            s += self.emissions[t][y];
            if t > 0 {
                s += self.transitions[labels[t - 1]][y];
            }
        }
        s
    }

    /// Forward log-messages `alpha[t][y]`.
    fn alphas(&self) -> Vec<[f64; N_LABELS]> {
        let mut alpha = Vec::with_capacity(self.len());
        let Some(first) = self.emissions.first() else {
            return alpha;
        };
        alpha.push(*first);
        for t in 1..self.len() {
            let prev = alpha[t - 1];
            let mut cur = [0.0; N_LABELS];
            for (j, c) in cur.iter_mut().enumerate() {
                let terms: [f64; N_LABELS] = std::array::from_fn(|i| prev[i] + self.transitions[i][j]);
                *c = log_sum_exp(&terms) + self.emissions[t][j];
            }
            alpha.push(cur);
        }
        alpha
    }

    /// Backward log-messages `beta[t][y]`.
    fn betas(&self) -> Vec<[f64; N_LABELS]> {
        let n = self.len();
        let mut beta = vec![[0.0; N_LABELS]; n];
        for t in (0..n.saturating_sub(1)).rev() {
            for i in 0..N_LABELS {
                let terms: [f64; N_LABELS] =
                    std::array::from_fn(|j| self.transitions[i][j] + self.emissions[t + 1][j] + beta[t + 1][j]);
                beta[t][i] = log_sum_exp(&terms);
            }
        }
        beta
    }

    /// `log Σ_y exp(score(y))`; 0 for an empty sentence.
    pub fn log_partition(&self) -> f64 {
        match self.alphas().last() {
            Some(last) => log_sum_exp(last),
            None => 0.0,
        }
    }

    /// Node marginals `P(y_t = j)` and edge marginals
    /// `P(y_{t-1} = i, y_t = j)` (indexed from `t = 1`).
    pub fn marginals(&self) -> (Vec<[f64; N_LABELS]>, Vec<[[f64; N_LABELS]; N_LABELS]>) {
        let alpha = self.alphas();
        let beta = self.betas();
        let log_z = match alpha.last() {
            Some(last) => log_sum_exp(last),
            None => return (Vec::new(), Vec::new()),
        };
        let nodes = (0..self.len())
            .map(|t| std::array::from_fn(|j| (alpha[t][j] + beta[t][j] - log_z).exp()))
            .collect();
        let edges = (1..self.len())
            .map(|t| {
                std::array::from_fn(|i| {
                    std::array::from_fn(|j| {
                        (alpha[t - 1][i] + self.transitions[i][j] + self.emissions[t][j] + beta[t][j] - log_z).exp()
                    })
                })
            })
            .collect();
        (nodes, edges)
    }

    /// Highest-scoring label sequence and its score. Ties go to the lower
    /// label id, both for the final label and for back-pointers.
    pub fn viterbi(&self) -> (Vec<usize>, f64) {
        let n = self.len();
        if n == 0 {
            return (Vec::new(), 0.0);
        }
        let mut delta = self.emissions[0];
        let mut back = vec![[0usize; N_LABELS]; n];
        for t in 1..n {
            let mut next = [0.0; N_LABELS];
            for j in 0..N_LABELS {
                let mut best = 0;
                let mut best_score = delta[0] + self.transitions[0][j];
                for i in 1..N_LABELS {
                    let s = delta[i] + self.transitions[i][j];
                    if s > best_score {
                        best = i;
                        best_score = s;
                    }
                }
                back[t][j] = best;
                next[j] = best_score + self.emissions[t][j];
            }
            delta = next;
        }
        let mut last = 0;
        for j in 1..N_LABELS {
            if delta[j] > delta[last] {
                last = j;
            }
        }
        let score = delta[last];
        let mut path = vec![0; n];
        path[n - 1] = last;
        for t in (1..n).rev() {
            path[t - 1] = back[t][path[t]];
        }
        (path, score)
    }
}

/// Word shape: uppercase → `X`, lowercase → `x`, digit → `d`, other kept,
/// with runs collapsed.
fn shape(word: &str) -> String {
    let mut out = String::new();
    for c in word.chars() {
        let s = if c.is_uppercase() {
            'X'
        } else if c.is_lowercase() {
            'x'
        } else if c.is_ascii_digit() {
            'd'
        } else {
            c
        };
        if !out.ends_with(s) {
            out.push(s);
        }
    }
    out
}

/// Feature strings active at position `t`: bias, current word, lowercased
/// word, previous and next words, word shape, and prefixes/suffixes up to
/// length 3.
pub fn token_features(tokens: &[String], t: usize) -> Vec<String> {
    let word = &tokens[t];
    let lower = word.to_lowercase();
    let chars: Vec<char> = lower.chars().collect();
    let mut feats = vec![
        "bias".to_owned(),
        format!("w={word}"),
        format!("lw={lower}"),
        match t.checked_sub(1) {
            Some(p) => format!("pw={}", tokens[p].to_lowercase()),
            None => "pw=<s>".to_owned(),
        },
        match tokens.get(t + 1) {
            Some(n) => format!("nw={}", n.to_lowercase()),
            None => "nw=</s>".to_owned(),
        },
        format!("shape={}", shape(word)),
    ];
    for k in 1..=3.min(chars.len()) {
        feats.push(format!("pre{k}={}", chars[..k].iter().collect::<String>()));
        feats.push(format!(
            "suf{k}={}",
            chars[chars.len() - k..].iter().collect::<String>()
        ));
    }
    feats
}

/// CRF weights. `emission` is `features.len() × N_LABELS` row-major;
/// `transition[i * N_LABELS + j]` scores label `i` followed by `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrfParams {
    features: Vec<String>,
    index: HashMap<String, usize>,
    pub emission: Vec<f64>,
    pub transition: Vec<f64>,
}

impl ParamSet for CrfParams {
    fn slices(&self) -> Vec<&[f64]> {
        vec![&self.emission, &self.transition]
    }

    fn slices_mut(&mut self) -> Vec<&mut [f64]> {
        vec![&mut self.emission, &mut self.transition]
    }
}

impl CrfParams {
    /// Zero weights over the given feature names (deduplicated, sorted).
    pub fn with_features<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let features: Vec<String> = names
            .into_iter()
            .map(Into::into)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = features.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        CrfParams {
            emission: vec![0.0; features.len() * N_LABELS],
            transition: vec![0.0; N_LABELS * N_LABELS],
            features,
            index,
        }
    }

    /// Zero weights over every feature observed in `corpus`.
    pub fn from_corpus(corpus: &[TaggedSentence]) -> Self {
        Self::with_features(
            corpus
                .iter()
                .flat_map(|s| (0..s.len()).flat_map(move |t| token_features(&s.tokens, t))),
        )
    }

    /// Restores weights saved with [`CrfParams::features`].
    pub fn from_parts(features: Vec<String>, emission: Vec<f64>, transition: Vec<f64>) -> Result<Self> {
        let mut p = Self::with_features(features.iter().cloned());
        if p.features != features {
            return Err(Error::Model("CRF feature names must be unique and sorted".into()));
        }
        if emission.len() != p.emission.len() || transition.len() != p.transition.len() {
            return Err(Error::Model("CRF weight arrays do not match the feature count".into()));
        }
        p.emission = emission;
        p.transition = transition;
        if !p.all_finite() {
            return Err(Error::Model("non-finite CRF weight".into()));
        }
        Ok(p)
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn feature_id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Known feature ids per position; unseen features are ignored.
    pub fn active_features(&self, tokens: &[String]) -> Vec<Vec<usize>> {
        (0..tokens.len())
            .map(|t| {
                token_features(tokens, t)
                    .iter()
                    .filter_map(|f| self.feature_id(f))
                    .collect()
            })
            .collect()
    }

    fn transition_matrix(&self) -> [[f64; N_LABELS]; N_LABELS] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.transition[i * N_LABELS + j]))
    }

    fn potentials_from(&self, active: &[Vec<usize>]) -> Potentials {
        Potentials {
            emissions: active
                .iter()
                .map(|ids| {
                    let mut e = [0.0; N_LABELS];
                    for &f in ids {
                        for (y, ey) in e.iter_mut().enumerate() {
                            *ey += self.emission[f * N_LABELS + y];
                        }
                    }
                    e
                })
                .collect(),
            transitions: self.transition_matrix(),
        }
    }

    pub fn potentials(&self, tokens: &[String]) -> Potentials {
        self.potentials_from(&self.active_features(tokens))
    }
}

pub fn crf_log_partition(p: &CrfParams, tokens: &[String]) -> f64 {
    p.potentials(tokens).log_partition()
}

/// Best tag sequence and its score.
pub fn crf_viterbi(p: &CrfParams, tokens: &[String]) -> (Vec<BioTag>, f64) {
    let (path, score) = p.potentials(tokens).viterbi();
    (path.into_iter().map(|y| BioTag::ALL[y]).collect(), score)
}

/// Mean negative conditional log-likelihood plus `l2 · Σw²`, and its
/// gradient from forward-backward expected feature counts.
pub fn crf_loss_grad(p: &CrfParams, batch: &[TaggedSentence], l2: f64) -> Result<(f64, CrfParams)> {
    let mut grad = p.zeros_like();
    let sentences: Vec<&TaggedSentence> = batch.iter().filter(|s| !s.is_empty()).collect();
    let scale = if sentences.is_empty() {
        0.0
    } else {
        1.0 / sentences.len() as f64
    };
    let mut nll = 0.0;
    for s in sentences {
        let active = p.active_features(&s.tokens);
        let pot = p.potentials_from(&active);
        let gold: Vec<usize> = s.labels.iter().map(|l| l.id()).collect();
        nll += pot.log_partition() - pot.score(&gold);
        let (nodes, edges) = pot.marginals();
        for (t, ids) in active.iter().enumerate() {
            for &f in ids {
                for y in 0..N_LABELS {
                    let observed = if gold[t] == y { 1.0 } else { 0.0 };
                    grad.emission[f * N_LABELS + y] += scale * (nodes[t][y] - observed);
                }
            }
        }
        for (k, edge) in edges.iter().enumerate() {
            let t = k + 1;
            for i in 0..N_LABELS {
                for j in 0..N_LABELS {
                    let observed = if gold[t - 1] == i && gold[t] == j { 1.0 } else { 0.0 };
                    grad.transition[i * N_LABELS + j] += scale * (edge[i][j] - observed);
                }
            }
        }
    }
    let mut loss = nll * scale;
    if l2 > 0.0 {
        loss += l2 * p.sum_squares();
        grad.add_scaled(p, 2.0 * l2);
    }
    Ok((loss, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_potentials(n: usize, rng: &mut impl Rng) -> Potentials {
        Potentials {
            emissions: (0..n)
                .map(|_| std::array::from_fn(|_| rng.gen_range(-5.0..5.0)))
                .collect(),
            transitions: std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-5.0..5.0))),
        }
    }

    fn toks(s: &str) -> Vec<String> {
        s.split(' ').map(str::to_owned).collect()
    }

    #[test]
    fn zero_weights_uniform_partition() {
        let p = CrfParams::with_features(["bias"]);
        let z = crf_log_partition(&p, &toks("a b c"));
        assert!((z - 3.0 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn single_token_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pot = random_potentials(1, &mut rng);
        let direct = pot.emissions[0].iter().map(|e| e.exp()).sum::<f64>().ln();
        assert!((pot.log_partition() - direct).abs() < 1e-12);
    }

    #[test]
    fn strong_outside_emission() {
        let mut p = CrfParams::with_features(["bias"]);
        p.emission[BioTag::O.id()] = 10.0;
        let (tags, _) = crf_viterbi(&p, &toks("a b c d"));
        assert!(tags.iter().all(|&t| t == BioTag::O));
    }

    #[test]
    fn viterbi_score_is_self_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..7 {
            let pot = random_potentials(n, &mut rng);
            let (path, score) = pot.viterbi();
            assert!((pot.score(&path) - score).abs() < 1e-10);
        }
    }

    #[test]
    fn marginals_normalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pot = random_potentials(6, &mut rng);
        let (nodes, edges) = pot.marginals();
        for node in nodes {
            assert!((node.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        for edge in edges {
            assert!((edge.iter().flatten().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn features_include_context_and_affixes() {
        let f = token_features(&toks("Colon cancer"), 0);
        for want in [
            "bias",
            "w=Colon",
            "lw=colon",
            "pw=<s>",
            "nw=cancer",
            "shape=Xx",
            "pre3=col",
            "suf2=on",
        ] {
            assert!(f.contains(&want.to_owned()), "{want}");
        }
        assert_eq!(shape("COVID-19"), "X-d");
    }

    #[test]
    fn from_parts_round_trip() {
        let mut p = CrfParams::with_features(["b", "a"]);
        p.emission[4] = 1.5;
        let q = CrfParams::from_parts(p.features().to_vec(), p.emission.clone(), p.transition.clone()).unwrap();
        assert_eq!(p, q);
        assert!(CrfParams::from_parts(vec!["b".into(), "a".into()], vec![0.0; 6], vec![0.0; 9]).is_err());
    }
}
