use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::classify::LogregConfig;
use crate::medterm::ProjectionMode;
use crate::seqtag::TrainConfig;
use crate::{Error, Result};

/// Settings read from `--config`. Relative paths are resolved against the
/// config file's directory. Command-line flags take precedence.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: Option<u64>,
    pub work_dir: Option<PathBuf>,
    pub corpus_dir: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub transition_words: Option<PathBuf>,
    pub summary_words: Option<PathBuf>,
    pub active_verbs: Option<PathBuf>,
    /// Share of videos used for training; the rest are held out.
    pub split_fraction: f64,
    pub projection: ProjectionMode,
    pub tagger: TrainConfig,
    pub classifier: LogregConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: None,
            work_dir: None,
            corpus_dir: None,
            dictionary: None,
            stopwords: None,
            transition_words: None,
            summary_words: None,
            active_verbs: None,
            split_fraction: 0.8,
            projection: ProjectionMode::default(),
            tagger: TrainConfig::default(),
            classifier: LogregConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn parse(context: &str, text: &str) -> Result<Self> {
        let config: PipelineConfig =
            toml::from_str(text).map_err(|e| Error::schema(context, e.message().to_owned()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::parse(&path.display().to_string(), &text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut config.work_dir,
            &mut config.corpus_dir,
            &mut config.dictionary,
            &mut config.stopwords,
            &mut config.transition_words,
            &mut config.summary_words,
            &mut config.active_verbs,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(Error::Invalid(format!(
                "split_fraction must be in (0, 1), got {}",
                self.split_fraction
            )));
        }
        self.tagger.validate()
    }
}
