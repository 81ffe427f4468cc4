use std::path::Path;

use serde::{Deserialize, Serialize};

use super::features::{FeatureVector, BINARY_FEATURES};
use super::logreg::{sigmoid, standardize_apply, standardize_fit, train_logreg, wald_pvalues, LogregConfig, Scaler};
use super::metrics::ClfMetrics;
use crate::split::split_train_test;
use crate::{Error, Result};

pub const CLF_FORMAT: &str = "vidtriage-logreg";
pub const CLF_VERSION: u32 = 1;

/// The three classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    #[value(name = "recommendation")]
    Recommendation,
    #[value(name = "medical_info")]
    MedicalInfo,
    #[value(name = "understandability")]
    Understandability,
}

const RECOMMENDATION: &[&str] = &[
    "medical_info_high",
    "understandable",
    "ocr_confidence",
    "n_active_verbs_v",
    "readability_v",
    "n_sentences_v",
    "n_shots",
    "shot_change_confidence",
    "n_summary_words_v",
    "transcription_confidence",
    "n_transition_words_v",
    "n_words_v",
    "n_unique_words_v",
    "has_title",
    "has_description",
    "has_tags",
    "n_unique_medical_terms",
    "readability_m",
    "n_sentences_m",
    "n_words_m",
    "n_unique_words_m",
    "n_transition_words_m",
    "n_summary_words_m",
    "n_active_verbs_m",
    "duration_s",
];

const MEDICAL_INFO: &[&str] = &[
    "has_title",
    "has_description",
    "has_tags",
    "n_unique_medical_terms",
    "readability_m",
    "n_sentences_m",
    "n_words_m",
    "n_unique_words_m",
    "n_transition_words_m",
    "n_summary_words_m",
    "n_active_verbs_m",
    "duration_s",
    "n_transition_words_v",
    "n_words_v",
    "n_unique_words_v",
    "n_active_verbs_v",
    "readability_v",
    "n_sentences_v",
];

const UNDERSTANDABILITY: &[&str] = &[
    "ocr_confidence",
    "n_active_verbs_v",
    "readability_v",
    "n_sentences_v",
    "n_shots",
    "shot_change_confidence",
    "n_summary_words_v",
    "transcription_confidence",
    "n_transition_words_v",
    "n_words_v",
    "n_unique_words_v",
];

impl Target {
    pub const ALL: [Target; 3] = [Target::Recommendation, Target::MedicalInfo, Target::Understandability];

    pub fn as_str(self) -> &'static str {
        match self {
            Target::Recommendation => "recommendation",
            Target::MedicalInfo => "medical_info",
            Target::Understandability => "understandability",
        }
    }

    /// The FeatureVector field holding this classifier's label.
    pub fn label_field(self) -> &'static str {
        match self {
            Target::Recommendation => "recommended",
            Target::MedicalInfo => "medical_info_high",
            Target::Understandability => "understandable",
        }
    }

    /// Input features in the classifier's canonical order.
    pub fn features(self) -> &'static [&'static str] {
        match self {
            Target::Recommendation => RECOMMENDATION,
            Target::MedicalInfo => MEDICAL_INFO,
            Target::Understandability => UNDERSTANDABILITY,
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: Target,
    pub features: Vec<String>,
}

impl FeatureSpec {
    pub fn for_target(target: Target) -> Self {
        FeatureSpec {
            name: target,
            features: target.features().iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn binary_mask(&self) -> Vec<bool> {
        self.features
            .iter()
            .map(|f| BINARY_FEATURES.contains(&f.as_str()))
            .collect()
    }

    /// Raw feature values of one row in spec order.
    pub fn row(&self, fv: &FeatureVector) -> Result<Vec<f64>> {
        self.features.iter().map(|f| fv.value(f)).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClfTrainMeta {
    pub seed: u64,
    pub split_fraction: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
}

/// A fitted classifier. Standard errors and p-values list the intercept
/// first, then the coefficients in spec order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrModel {
    pub format: String,
    pub version: u32,
    pub spec: FeatureSpec,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub scaler: Scaler,
    pub standard_errors: Vec<f64>,
    pub p_values: Vec<f64>,
    pub l2: f64,
    pub iterations: usize,
    pub train_meta: ClfTrainMeta,
}

/// Classifier training settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClfConfig {
    pub split_fraction: f64,
    #[serde(flatten)]
    pub optimizer: LogregConfig,
}

impl Default for ClfConfig {
    fn default() -> Self {
        ClfConfig {
            split_fraction: 0.8,
            optimizer: LogregConfig::default(),
        }
    }
}

fn label_of(target: Target, fv: &FeatureVector) -> Option<u8> {
    fv.get(target.label_field()).ok().flatten().map(|v| u8::from(v >= 0.5))
}

/// Fits scaler, coefficients and Wald statistics on `rows`.
pub fn fit_rows(spec: &FeatureSpec, rows: &[FeatureVector], config: &LogregConfig) -> Result<LrModel> {
    let x = rows.iter().map(|r| spec.row(r)).collect::<Result<Vec<_>>>()?;
    let y = rows
        .iter()
        .map(|r| {
            label_of(spec.name, r)
                .ok_or_else(|| Error::Invalid(format!("video {} has no {} label", r.video_id, spec.name.label_field())))
        })
        .collect::<Result<Vec<_>>>()?;
    let scaler = standardize_fit(&x, &spec.binary_mask());
    let z = standardize_apply(&scaler, &x);
    let fit = train_logreg(&z, &y, config)?;
    let wald = wald_pvalues(&fit, &z)?;
    Ok(LrModel {
        format: CLF_FORMAT.to_owned(),
        version: CLF_VERSION,
        spec: spec.clone(),
        intercept: fit.intercept,
        coefficients: fit.coefficients,
        scaler,
        standard_errors: wald.standard_errors,
        p_values: wald.p_values,
        l2: fit.l2,
        iterations: fit.iterations,
        train_meta: ClfTrainMeta {
            n_train: rows.len(),
            train_ids: rows.iter().map(|r| r.video_id.clone()).collect(),
            ..Default::default()
        },
    })
}

/// Splits the labeled rows 80/20 (by default) at the video level with
/// `seed`, then fits on the training part.
pub fn train_classifier(target: Target, rows: &[FeatureVector], seed: u64, config: &ClfConfig) -> Result<LrModel> {
    if !(config.split_fraction > 0.0 && config.split_fraction < 1.0) {
        return Err(Error::Invalid(format!(
            "split fraction must be in (0, 1), got {}",
            config.split_fraction
        )));
    }
    let mut labeled: Vec<&FeatureVector> = rows.iter().filter(|r| label_of(target, r).is_some()).collect();
    labeled.sort_by(|a, b| a.video_id.cmp(&b.video_id));
    let ids: Vec<&str> = labeled.iter().map(|r| r.video_id.as_str()).collect();
    let (mut train_ids, mut test_ids) = split_train_test(&ids, config.split_fraction, seed);
    train_ids.sort_unstable();
    test_ids.sort_unstable();
    let train: Vec<FeatureVector> = labeled
        .iter()
        .filter(|r| train_ids.binary_search(&r.video_id.as_str()).is_ok())
        .map(|r| (*r).clone())
        .collect();
    let mut model = fit_rows(&FeatureSpec::for_target(target), &train, &config.optimizer)?;
    model.train_meta = ClfTrainMeta {
        seed,
        split_fraction: config.split_fraction,
        n_train: train_ids.len(),
        n_test: test_ids.len(),
        train_ids: train_ids.iter().map(|s| s.to_string()).collect(),
        test_ids: test_ids.iter().map(|s| s.to_string()).collect(),
    };
    Ok(model)
}

impl LrModel {
    fn check(&self) -> Result<()> {
        let d = self.spec.features.len();
        if self.format != CLF_FORMAT || self.version != CLF_VERSION {
            return Err(Error::Model(format!(
                "expected {CLF_FORMAT} version {CLF_VERSION}, found {} version {}",
                self.format, self.version
            )));
        }
        if self.coefficients.len() != d
            || self.scaler.columns.len() != d
            || self.standard_errors.len() != d + 1
            || self.p_values.len() != d + 1
        {
            return Err(Error::Model("coefficient count does not match the feature spec".into()));
        }
        if self.p_values.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Model("p-value outside [0, 1]".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("model serializes");
        text.push('\n');
        text
    }

    pub fn from_json(context: &str, text: &str) -> Result<Self> {
        let model: LrModel = serde_json::from_str(text).map_err(|e| Error::from_json(context, text, &e))?;
        model.check().map_err(|e| Error::Model(format!("{context}: {e}")))?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&path.display().to_string(), &text)
    }

    /// Probability of label 1, kept strictly inside (0, 1).
    pub fn probability(&self, raw: &[f64]) -> f64 {
        let z = self.scaler.apply_row(raw);
        let eta = self.intercept + z.iter().zip(&self.coefficients).map(|(a, b)| a * b).sum::<f64>();
        sigmoid(eta).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
    }
}

/// Probability and label (1 iff p ≥ 0.5) for one video.
pub fn predict(model: &LrModel, x: &FeatureVector) -> Result<(f64, u8)> {
    let p = model.probability(&model.spec.row(x)?);
    Ok((p, u8::from(p >= 0.5)))
}

/// Scores `model` on `rows`, which must all carry the target label.
pub fn evaluate(model: &LrModel, rows: &[FeatureVector]) -> Result<ClfMetrics> {
    if rows.is_empty() {
        return Err(Error::Invalid("cannot evaluate on an empty test set".into()));
    }
    let pairs = rows
        .iter()
        .map(|r| {
            let gold = label_of(model.spec.name, r).ok_or_else(|| {
                Error::Invalid(format!(
                    "video {} has no {} label",
                    r.video_id,
                    model.spec.name.label_field()
                ))
            })?;
            Ok((predict(model, r)?.1, gold))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClfMetrics::from_pairs(pairs))
}

/// Rows of `rows` whose ids are the model's held-out test ids.
pub fn test_rows(model: &LrModel, rows: &[FeatureVector]) -> Result<Vec<FeatureVector>> {
    model
        .train_meta
        .test_ids
        .iter()
        .map(|id| {
            rows.iter()
                .find(|r| &r.video_id == id)
                .cloned()
                .ok_or_else(|| Error::Integrity(format!("test video {id} is missing from the feature matrix")))
        })
        .collect()
}

/// Fills absent `medical_info_high` / `understandable` values with the
/// predicted labels of the corresponding classifiers. Observed values are
/// kept.
pub fn impute_annotations(
    rows: &mut [FeatureVector],
    medical_info: &LrModel,
    understandability: &LrModel,
) -> Result<usize> {
    if medical_info.spec.name != Target::MedicalInfo || understandability.spec.name != Target::Understandability {
        return Err(Error::Invalid(
            "imputation needs the medical_info and understandability models".into(),
        ));
    }
    let mut filled = 0;
    for row in rows.iter_mut() {
        if row.medical_info_high.is_none() {
            row.medical_info_high = Some(f64::from(predict(medical_info, row)?.1));
            filled += 1;
        }
        if row.understandable.is_none() {
            row.understandable = Some(f64::from(predict(understandability, row)?.1));
            filled += 1;
        }
    }
    Ok(filled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::features::FEATURE_NAMES;
    use crate::classify::logreg::{ColumnKind, ColumnScale};

    fn zero_model(target: Target, intercept: f64) -> LrModel {
        let spec = FeatureSpec::for_target(target);
        let d = spec.features.len();
        LrModel {
            format: CLF_FORMAT.into(),
            version: CLF_VERSION,
            intercept,
            coefficients: vec![0.0; d],
            scaler: Scaler {
                columns: vec![
                    ColumnScale {
                        mean: 0.0,
                        sd: 1.0,
                        kind: ColumnKind::Continuous
                    };
                    d
                ],
            },
            standard_errors: vec![1.0; d + 1],
            p_values: vec![1.0; d + 1],
            l2: 0.0,
            iterations: 0,
            train_meta: ClfTrainMeta::default(),
            spec,
        }
    }

    #[test]
    fn spec_sizes_follow_feature_table() {
        assert_eq!(Target::Recommendation.features().len(), 25);
        assert_eq!(Target::MedicalInfo.features().len(), 18);
        assert_eq!(Target::Understandability.features().len(), 11);
        for t in Target::ALL {
            for f in t.features() {
                assert!(FEATURE_NAMES.contains(f), "{f}");
            }
        }
        let rec: std::collections::BTreeSet<_> = RECOMMENDATION.iter().collect();
        assert_eq!(rec.len(), FEATURE_NAMES.len());
    }

    #[test]
    fn zero_model_predicts_half() {
        let fv = FeatureVector {
            medical_info_high: Some(1.0),
            understandable: Some(0.0),
            ..Default::default()
        };
        assert_eq!(
            predict(&zero_model(Target::Recommendation, 0.0), &fv).unwrap(),
            (0.5, 1)
        );
        let (p, label) = predict(&zero_model(Target::Recommendation, -3.66), &fv).unwrap();
        assert!((p - 0.025).abs() < 5e-4);
        assert_eq!(label, 0);
    }

    #[test]
    fn missing_feature_is_named() {
        let err = predict(&zero_model(Target::Recommendation, 0.0), &FeatureVector::default()).unwrap_err();
        assert!(err.to_string().contains("medical_info_high"));
    }

    #[test]
    fn extreme_inputs_stay_inside_unit_interval() {
        let mut m = zero_model(Target::Understandability, 0.0);
        m.coefficients[0] = 1.0;
        for v in [-1e6, 1e6] {
            let fv = FeatureVector {
                ocr_confidence: v,
                ..Default::default()
            };
            let p = predict(&m, &fv).unwrap().0;
            assert!(p > 0.0 && p < 1.0);
        }
    }

    #[test]
    fn json_round_trip() {
        let m = zero_model(Target::MedicalInfo, 0.25);
        assert_eq!(LrModel::from_json("m", &m.to_json()).unwrap(), m);
        let mut bad = m.clone();
        bad.coefficients.pop();
        assert!(LrModel::from_json("m", &bad.to_json()).is_err());
    }

    #[test]
    fn imputation_fills_only_absent_values() {
        let mut rows = vec![
            FeatureVector {
                video_id: "a".into(),
                medical_info_high: Some(0.0),
                ..Default::default()
            },
            FeatureVector {
                video_id: "b".into(),
                ..Default::default()
            },
        ];
        let med = zero_model(Target::MedicalInfo, 2.0);
        let und = zero_model(Target::Understandability, -2.0);
        assert_eq!(impute_annotations(&mut rows, &med, &und).unwrap(), 3);
        assert_eq!(rows[0].medical_info_high, Some(0.0));
        assert_eq!(rows[1].medical_info_high, Some(1.0));
        assert_eq!(rows[1].understandable, Some(0.0));
    }
}
