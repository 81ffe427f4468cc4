//! Per-video feature assembly and the three logistic-regression
//! classifiers (recommendation, medical information, understandability).
//!
//! Continuous features are z-scored with training-set statistics before
//! fitting; binary features are used as is. Standard errors come from the
//! inverse of the penalized observed information.

mod features;
mod logreg;
mod metrics;
mod model;
pub mod report;

pub use features::{
    assemble_features, features_from_tsv, features_to_tsv, featurize, matrix_columns, text_feature_names,
    video_text_features, FeatureVector, BINARY_FEATURES, FEATURE_NAMES,
};
pub use logreg::{
    format_p_value, logreg_gradient, logreg_objective, normal_two_sided_p, sigmoid, standardize_apply, standardize_fit,
    train_logreg, wald_pvalues, ColumnKind, ColumnScale, LogregConfig, LogregFit, Scaler, Wald,
};
pub use metrics::{ClassMetrics, ClfMetrics};
pub use model::{
    evaluate, fit_rows, impute_annotations, predict, test_rows, train_classifier, ClfConfig, ClfTrainMeta, FeatureSpec,
    LrModel, Target, CLF_FORMAT, CLF_VERSION,
};
