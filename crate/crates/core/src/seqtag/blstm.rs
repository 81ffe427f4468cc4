//! Bidirectional LSTM tagger with a per-token softmax output layer.
//!
//! Each direction runs a standard LSTM cell over the embedded tokens:
//!
//! ```text
//! z = W [x_t; h_{t-1}] + b          (gate blocks in order i, f, o, g)
//! c_t = σ(f) ⊙ c_{t-1} + σ(i) ⊙ tanh(g)
//! h_t = σ(o) ⊙ tanh(c_t)
//! ```
//!
//! The forward and backward hidden states are concatenated per token and
//! projected to label scores, normalized with log-softmax.

use rand::Rng;

use super::optim::ParamSet;
use super::vocab::Vocab;
use crate::medterm::TaggedSentence;
use crate::{Error, Result};

/// Gate weights of one LSTM direction. `w` is `4·d_hid × (d_emb + d_hid)`
/// row-major; `b` has `4·d_hid` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmWeights {
    pub w: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlstmParams {
    pub vocab_size: usize,
    pub d_emb: usize,
    pub d_hid: usize,
    pub n_labels: usize,
    /// `vocab_size × d_emb`
    pub embedding: Vec<f64>,
    pub forward: LstmWeights,
    pub backward: LstmWeights,
    /// `n_labels × 2·d_hid`
    pub out_w: Vec<f64>,
    pub out_b: Vec<f64>,
}

impl ParamSet for BlstmParams {
    fn slices(&self) -> Vec<&[f64]> {
        vec![
            &self.embedding,
            &self.forward.w,
            &self.forward.b,
            &self.backward.w,
            &self.backward.b,
            &self.out_w,
            &self.out_b,
        ]
    }

    fn slices_mut(&mut self) -> Vec<&mut [f64]> {
        vec![
            &mut self.embedding,
            &mut self.forward.w,
            &mut self.forward.b,
            &mut self.backward.w,
            &mut self.backward.b,
            &mut self.out_w,
            &mut self.out_b,
        ]
    }
}

impl BlstmParams {
    pub fn zeros(vocab_size: usize, d_emb: usize, d_hid: usize, n_labels: usize) -> Self {
        let lstm = || LstmWeights {
            w: vec![0.0; 4 * d_hid * (d_emb + d_hid)],
            b: vec![0.0; 4 * d_hid],
        };
        BlstmParams {
            vocab_size,
            d_emb,
            d_hid,
            n_labels,
            embedding: vec![0.0; vocab_size * d_emb],
            forward: lstm(),
            backward: lstm(),
            out_w: vec![0.0; n_labels * 2 * d_hid],
            out_b: vec![0.0; n_labels],
        }
    }

    /// Uniform initialization scaled by fan-in; forget-gate biases start at 1.
    pub fn init<R: Rng>(vocab_size: usize, d_emb: usize, d_hid: usize, n_labels: usize, rng: &mut R) -> Self {
        let mut p = Self::zeros(vocab_size, d_emb, d_hid, n_labels);
        let mut fill = |buf: &mut [f64], scale: f64| buf.iter_mut().for_each(|v| *v = rng.gen_range(-scale..scale));
        fill(&mut p.embedding, 0.1);
        let lstm_scale = 1.0 / (d_hid as f64).sqrt();
        fill(&mut p.forward.w, lstm_scale);
        fill(&mut p.backward.w, lstm_scale);
        fill(&mut p.out_w, 1.0 / (2.0 * d_hid as f64).sqrt());
        for lstm in [&mut p.forward, &mut p.backward] {
            lstm.b[d_hid..2 * d_hid].fill(1.0);
        }
        p
    }

    /// Checks that every buffer has the size implied by the dimensions.
    pub fn check_shapes(&self) -> Result<()> {
        let gate_w = 4 * self.d_hid * (self.d_emb + self.d_hid);
        let expected = [
            ("embedding", self.embedding.len(), self.vocab_size * self.d_emb),
            ("forward.w", self.forward.w.len(), gate_w),
            ("forward.b", self.forward.b.len(), 4 * self.d_hid),
            ("backward.w", self.backward.w.len(), gate_w),
            ("backward.b", self.backward.b.len(), 4 * self.d_hid),
            ("out_w", self.out_w.len(), self.n_labels * 2 * self.d_hid),
            ("out_b", self.out_b.len(), self.n_labels),
        ];
        for (name, got, want) in expected {
            if got != want {
                return Err(Error::Model(format!("{name} has {got} values, expected {want}")));
            }
        }
        if !self.all_finite() {
            return Err(Error::Model("non-finite parameter".into()));
        }
        Ok(())
    }

    fn embed(&self, id: usize) -> &[f64] {
        &self.embedding[id * self.d_emb..(id + 1) * self.d_emb]
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

struct Step {
    /// `[x_t; h_{t-1}]`
    input: Vec<f64>,
    i: Vec<f64>,
    f: Vec<f64>,
    o: Vec<f64>,
    g: Vec<f64>,
    c_prev: Vec<f64>,
    tanh_c: Vec<f64>,
    h: Vec<f64>,
}

fn run_lstm(lstm: &LstmWeights, xs: &[&[f64]], d_emb: usize, d_hid: usize) -> Vec<Step> {
    let width = d_emb + d_hid;
    let mut h = vec![0.0; d_hid];
    let mut c = vec![0.0; d_hid];
    let mut steps = Vec::with_capacity(xs.len());
    let mut z = vec![0.0; 4 * d_hid];
    for x in xs {
        let mut input = Vec::with_capacity(width);
        input.extend_from_slice(x);
        input.extend_from_slice(&h);
        for (r, zr) in z.iter_mut().enumerate() {
            let row = &lstm.w[r * width..(r + 1) * width];
            *zr = lstm.b[r] + row.iter().zip(&input).map(|(a, b)| a * b).sum::<f64>();
        }
        let i: Vec<f64> = z[..d_hid].iter().map(|&v| sigmoid(v)).collect();
        let f: Vec<f64> = z[d_hid..2 * d_hid].iter().map(|&v| sigmoid(v)).collect();
        let o: Vec<f64> = z[2 * d_hid..3 * d_hid].iter().map(|&v| sigmoid(v)).collect();
        let g: Vec<f64> = z[3 * d_hid..].iter().map(|&v| v.tanh()).collect();
        let c_prev = c.clone();
        for k in 0..d_hid {
            c[k] = f[k] * c_prev[k] + i[k] * g[k];
        }
        let tanh_c: Vec<f64> = c.iter().map(|v| v.tanh()).collect();
        h = o.iter().zip(&tanh_c).map(|(a, b)| a * b).collect();
        steps.push(Step {
            input,
            i,
            f,
            o,
            g,
            c_prev,
            tanh_c,
            h: h.clone(),
        });
    }
    steps
}

/// Backpropagation through time for one direction. `dh[t]` is the loss
/// gradient flowing into `h_t` from the output layer. Accumulates weight
/// gradients into `grad` and returns the gradient w.r.t. each input `x_t`.
fn backprop_lstm(
    lstm: &LstmWeights,
    steps: &[Step],
    dh: &[Vec<f64>],
    d_emb: usize,
    d_hid: usize,
    grad: &mut LstmWeights,
) -> Vec<Vec<f64>> {
    let width = d_emb + d_hid;
    let mut dx = vec![Vec::new(); steps.len()];
    let mut dh_next = vec![0.0; d_hid];
    let mut dc_next = vec![0.0; d_hid];
    let mut dz = vec![0.0; 4 * d_hid];
    for t in (0..steps.len()).rev() {
        let s = &steps[t];
        for k in 0..d_hid {
            let dh_k = dh[t][k] + dh_next[k];
            let d_o = dh_k * s.tanh_c[k];
            let dc = dc_next[k] + dh_k * s.o[k] * (1.0 - s.tanh_c[k] * s.tanh_c[k]);
            let d_i = dc * s.g[k];
            let d_g = dc * s.i[k];
            let d_f = dc * s.c_prev[k];
            dc_next[k] = dc * s.f[k];
            dz[k] = d_i * s.i[k] * (1.0 - s.i[k]);
            dz[d_hid + k] = d_f * s.f[k] * (1.0 - s.f[k]);
            dz[2 * d_hid + k] = d_o * s.o[k] * (1.0 - s.o[k]);
            dz[3 * d_hid + k] = d_g * (1.0 - s.g[k] * s.g[k]);
        }
        let mut d_input = vec![0.0; width];
        for (r, &dzr) in dz.iter().enumerate() {
            if dzr == 0.0 {
                continue;
            }
            grad.b[r] += dzr;
            let row = &lstm.w[r * width..(r + 1) * width];
            let grow = &mut grad.w[r * width..(r + 1) * width];
            for k in 0..width {
                grow[k] += dzr * s.input[k];
                d_input[k] += row[k] * dzr;
            }
        }
        dh_next.copy_from_slice(&d_input[d_emb..]);
        d_input.truncate(d_emb);
        dx[t] = d_input;
    }
    dx
}

struct Pass {
    fwd: Vec<Step>,
    /// Steps over the reversed sequence: `bwd[k]` is position `n - 1 - k`.
    bwd: Vec<Step>,
    concat: Vec<Vec<f64>>,
    log_probs: Vec<Vec<f64>>,
}

fn log_softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
    scores.iter().map(|s| s - lse).collect()
}

fn check_ids(p: &BlstmParams, ids: &[usize]) -> Result<()> {
    if ids.is_empty() {
        return Err(Error::Invalid("cannot tag an empty sequence".into()));
    }
    if let Some(&bad) = ids.iter().find(|&&id| id >= p.vocab_size) {
        return Err(Error::Invalid(format!(
            "token id {bad} out of range for vocabulary of size {}",
            p.vocab_size
        )));
    }
    Ok(())
}

fn run(p: &BlstmParams, ids: &[usize]) -> Pass {
    let (e, h) = (p.d_emb, p.d_hid);
    let xs: Vec<&[f64]> = ids.iter().map(|&id| p.embed(id)).collect();
    let rev: Vec<&[f64]> = xs.iter().rev().copied().collect();
    let fwd = run_lstm(&p.forward, &xs, e, h);
    let bwd = run_lstm(&p.backward, &rev, e, h);
    let n = ids.len();
    let mut concat = Vec::with_capacity(n);
    let mut log_probs = Vec::with_capacity(n);
    for t in 0..n {
        let mut hc = fwd[t].h.clone();
        hc.extend_from_slice(&bwd[n - 1 - t].h);
        let scores: Vec<f64> = (0..p.n_labels)
            .map(|l| {
                let row = &p.out_w[l * 2 * h..(l + 1) * 2 * h];
                p.out_b[l] + row.iter().zip(&hc).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect();
        log_probs.push(log_softmax(&scores));
        concat.push(hc);
    }
    Pass {
        fwd,
        bwd,
        concat,
        log_probs,
    }
}

/// Per-token label log-probabilities.
pub fn blstm_forward(p: &BlstmParams, token_ids: &[usize]) -> Result<Vec<Vec<f64>>> {
    check_ids(p, token_ids)?;
    Ok(run(p, token_ids).log_probs)
}

/// Mean token cross-entropy plus `l2 · Σθ²`, and its gradient.
///
/// Each example is `(token ids, gold label ids)`. Empty sequences are skipped.
pub fn blstm_loss_grad_ids(p: &BlstmParams, batch: &[(Vec<usize>, Vec<usize>)], l2: f64) -> Result<(f64, BlstmParams)> {
    let (e, h) = (p.d_emb, p.d_hid);
    let mut grad = p.zeros_like();
    let n_tokens: usize = batch.iter().map(|(ids, _)| ids.len()).sum();
    let mut ce = 0.0;
    for (ids, gold) in batch.iter().filter(|(ids, _)| !ids.is_empty()) {
        check_ids(p, ids)?;
        if gold.len() != ids.len() || gold.iter().any(|&g| g >= p.n_labels) {
            return Err(Error::Invalid("gold labels do not match the token sequence".into()));
        }
        let pass = run(p, ids);
        let n = ids.len();
        let scale = 1.0 / n_tokens as f64;
        let mut dh_fwd = vec![vec![0.0; h]; n];
        let mut dh_bwd = vec![vec![0.0; h]; n];
        for t in 0..n {
            ce -= pass.log_probs[t][gold[t]];
            let hc = &pass.concat[t];
            let mut dhc = vec![0.0; 2 * h];
            for l in 0..p.n_labels {
                let mut ds = pass.log_probs[t][l].exp();
                if l == gold[t] {
                    ds -= 1.0;
                }
                ds *= scale;
                grad.out_b[l] += ds;
                let row = &p.out_w[l * 2 * h..(l + 1) * 2 * h];
                let grow = &mut grad.out_w[l * 2 * h..(l + 1) * 2 * h];
                for k in 0..2 * h {
                    grow[k] += ds * hc[k];
                    dhc[k] += ds * row[k];
                }
            }
            dh_fwd[t].copy_from_slice(&dhc[..h]);
            dh_bwd[n - 1 - t].copy_from_slice(&dhc[h..]);
        }
        let dx_f = backprop_lstm(&p.forward, &pass.fwd, &dh_fwd, e, h, &mut grad.forward);
        let dx_b = backprop_lstm(&p.backward, &pass.bwd, &dh_bwd, e, h, &mut grad.backward);
        for t in 0..n {
            let row = &mut grad.embedding[ids[t] * e..(ids[t] + 1) * e];
            for k in 0..e {
                row[k] += dx_f[t][k] + dx_b[n - 1 - t][k];
            }
        }
    }
    let mut loss = if n_tokens > 0 { ce / n_tokens as f64 } else { 0.0 };
    if l2 > 0.0 {
        loss += l2 * p.sum_squares();
        grad.add_scaled(p, 2.0 * l2);
    }
    Ok((loss, grad))
}

/// Loss and gradient for tagged sentences, mapping tokens through `vocab`.
pub fn blstm_loss_grad(
    p: &BlstmParams,
    batch: &[TaggedSentence],
    vocab: &Vocab,
    l2: f64,
) -> Result<(f64, BlstmParams)> {
    let encoded: Vec<_> = batch.iter().map(|s| encode(vocab, s)).collect();
    blstm_loss_grad_ids(p, &encoded, l2)
}

pub(crate) fn encode(vocab: &Vocab, s: &TaggedSentence) -> (Vec<usize>, Vec<usize>) {
    (vocab.ids(&s.tokens), s.labels.iter().map(|l| l.id()).collect())
}
