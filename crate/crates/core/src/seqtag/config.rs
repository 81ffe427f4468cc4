use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tagger training hyperparameters. Recorded in every model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub seed: u64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub l2: f64,
    pub batch_size: usize,
    pub d_emb: usize,
    pub d_hid: usize,
    /// Global gradient norm ceiling.
    pub clip_norm: f64,
    /// Epochs without held-out improvement before stopping.
    pub patience: usize,
    pub min_count: usize,
    /// Share of the training sentences held out for early stopping.
    pub dev_fraction: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            seed: 0,
            epochs: 30,
            learning_rate: 0.01,
            l2: 1e-4,
            batch_size: 16,
            d_emb: 50,
            d_hid: 64,
            clip_norm: 5.0,
            patience: 5,
            min_count: 1,
            dev_fraction: 0.1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("epochs", self.epochs as f64),
            ("learning_rate", self.learning_rate),
            ("batch_size", self.batch_size as f64),
            ("d_emb", self.d_emb as f64),
            ("d_hid", self.d_hid as f64),
            ("clip_norm", self.clip_norm),
            ("patience", self.patience as f64),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Invalid(format!("{name} must be positive, got {value}")));
            }
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return Err(Error::Invalid(format!("l2 must be non-negative, got {}", self.l2)));
        }
        if !(0.0..1.0).contains(&self.dev_fraction) {
            return Err(Error::Invalid(format!(
                "dev_fraction must be in [0, 1), got {}",
                self.dev_fraction
            )));
        }
        Ok(())
    }
}
