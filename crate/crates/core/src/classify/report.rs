//! Report tables in TSV form.

use super::logreg::format_p_value;
use super::metrics::ClfMetrics;
use super::model::{LrModel, Target};
use crate::seqtag::TagMetrics;
use crate::tsv::{fmt3, Table};

/// Tagger comparison: rows `crf` then `blstm`.
pub fn tagger_table(crf: &TagMetrics, blstm: &TagMetrics) -> String {
    let mut t = Table::new(["model", "precision", "recall", "f_measure"]);
    for (name, m) in [("crf", crf), ("blstm", blstm)] {
        t.push(vec![name.into(), fmt3(m.precision), fmt3(m.recall), fmt3(m.f_measure)]);
    }
    t.to_tsv()
}

/// Positive-class scores and accuracy of the medical information and
/// understandability classifiers.
pub fn classifier_table(medical_info: &ClfMetrics, understandability: &ClfMetrics) -> String {
    let mut t = Table::new(["classifier", "precision", "recall", "f_measure", "accuracy"]);
    for (target, m) in [
        (Target::MedicalInfo, medical_info),
        (Target::Understandability, understandability),
    ] {
        let c = m.positive;
        t.push(vec![
            target.as_str().into(),
            fmt3(c.precision),
            fmt3(c.recall),
            fmt3(c.f_measure),
            fmt3(m.accuracy),
        ]);
    }
    t.to_tsv()
}

/// Per-class scores of the recommendation classifier.
pub fn recommendation_table(m: &ClfMetrics) -> String {
    let mut t = Table::new(["class", "precision", "recall", "f_measure", "accuracy"]);
    for (name, c) in [("recommended", m.positive), ("not_recommended", m.negative)] {
        t.push(vec![
            name.into(),
            fmt3(c.precision),
            fmt3(c.recall),
            fmt3(c.f_measure),
            fmt3(m.accuracy),
        ]);
    }
    t.to_tsv()
}

/// Coefficient table with one estimate/p-value column pair per model.
/// The intercept comes first; features follow by the first model's estimate,
/// descending, then any features only later models use. Features a model
/// does not use show `-`.
pub fn coefficient_table(models: &[&LrModel]) -> String {
    let mut header = vec!["feature".to_owned()];
    for m in models {
        header.push(format!("{}_estimate", m.spec.name));
        header.push(format!("{}_p_value", m.spec.name));
    }
    let mut t = Table::new(header);

    let mut order: Vec<&str> = Vec::new();
    for m in models {
        let mut own: Vec<(usize, &str)> = m
            .spec
            .features
            .iter()
            .enumerate()
            .map(|(j, f)| (j, f.as_str()))
            .filter(|(_, f)| !order.contains(f))
            .collect();
        own.sort_by(|a, b| m.coefficients[b.0].total_cmp(&m.coefficients[a.0]));
        order.extend(own.into_iter().map(|(_, f)| f));
    }

    let mut intercept = vec!["(intercept)".to_owned()];
    for m in models {
        intercept.push(format!("{:.2}", m.intercept));
        intercept.push(format_p_value(m.p_values[0]));
    }
    t.push(intercept);
    for name in order {
        let mut row = vec![name.to_owned()];
        for m in models {
            match m.spec.features.iter().position(|f| f == name) {
                Some(j) => {
                    row.push(format!("{:.2}", m.coefficients[j]));
                    row.push(format_p_value(m.p_values[j + 1]));
                }
                None => row.extend(["-".to_owned(), "-".to_owned()]),
            }
        }
        t.push(row);
    }
    t.to_tsv()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tagger_layout() {
        let crf = TagMetrics::from_counts(50, 4, 4);
        let blstm = TagMetrics::from_counts(10, 0, 0);
        assert_eq!(
            tagger_table(&crf, &blstm),
            "model\tprecision\trecall\tf_measure\ncrf\t0.926\t0.926\t0.926\nblstm\t1.000\t1.000\t1.000\n"
        );
    }

    #[test]
    fn recommendation_layout() {
        let m = ClfMetrics::from_confusion(22, 2, 1, 32);
        assert_eq!(
            recommendation_table(&m),
            "class\tprecision\trecall\tf_measure\taccuracy\n\
             recommended\t0.917\t0.957\t0.936\t0.947\n\
             not_recommended\t0.970\t0.941\t0.955\t0.947\n"
        );
    }
}
