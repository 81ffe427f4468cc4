use serde::{Deserialize, Serialize};

use crate::medterm::{entity_spans, BioTag};
use crate::{Error, Result};

/// Precision, recall and F-measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TagMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

impl TagMetrics {
    /// Precision is 0 when nothing is predicted, recall 0 when nothing is
    /// gold, and F is 0 when both are 0.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f_measure = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        TagMetrics {
            precision,
            recall,
            f_measure,
        }
    }
}

fn check_aligned(predictions: &[Vec<BioTag>], gold: &[Vec<BioTag>]) -> Result<()> {
    if predictions.len() != gold.len() {
        return Err(Error::Invalid(format!(
            "{} predicted sequences but {} gold sequences",
            predictions.len(),
            gold.len()
        )));
    }
    for (i, (p, g)) in predictions.iter().zip(gold).enumerate() {
        if p.len() != g.len() {
            return Err(Error::Invalid(format!(
                "sequence {i}: {} predicted tags but {} gold tags",
                p.len(),
                g.len()
            )));
        }
    }
    Ok(())
}

/// Token-level scores over the entity classes `B-MED` and `I-MED`,
/// micro-averaged; `O` is the negative class.
pub fn evaluate_tagger(predictions: &[Vec<BioTag>], gold: &[Vec<BioTag>]) -> Result<TagMetrics> {
    check_aligned(predictions, gold)?;
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (p, g) in predictions.iter().zip(gold) {
        for (&pt, &gt) in p.iter().zip(g) {
            if pt.is_entity() && pt == gt {
                tp += 1;
            } else {
                fp += usize::from(pt.is_entity());
                fn_ += usize::from(gt.is_entity());
            }
        }
    }
    Ok(TagMetrics::from_counts(tp, fp, fn_))
}

/// Exact-match span scores.
pub fn evaluate_spans(predictions: &[Vec<BioTag>], gold: &[Vec<BioTag>]) -> Result<TagMetrics> {
    check_aligned(predictions, gold)?;
    let (mut tp, mut n_pred, mut n_gold) = (0, 0, 0);
    for (p, g) in predictions.iter().zip(gold) {
        let ps = entity_spans(p);
        let gs = entity_spans(g);
        tp += ps.iter().filter(|s| gs.contains(s)).count();
        n_pred += ps.len();
        n_gold += gs.len();
    }
    Ok(TagMetrics::from_counts(tp, n_pred - tp, n_gold - tp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use BioTag::{B, I, O};

    #[test]
    fn perfect() {
        let gold = vec![vec![B, I, O], vec![O, B]];
        let m = evaluate_tagger(&gold, &gold).unwrap();
        assert_eq!((m.precision, m.recall, m.f_measure), (1.0, 1.0, 1.0));
    }

    #[test]
    fn crf_regime_counts() {
        // 50 correct entity tokens, 4 false alarms, 4 misses.
        let mut gold = vec![B; 54];
        gold.extend([O; 4]);
        let mut pred = vec![B; 50];
        pred.extend([O; 4]);
        pred.extend([B; 4]);
        let m = evaluate_tagger(&[pred], &[gold]).unwrap();
        assert!((m.precision - 50.0 / 54.0).abs() < 1e-12);
        assert!((m.recall - 0.926).abs() < 1e-3);
        assert!((m.f_measure - 0.926).abs() < 1e-3);
    }

    #[test]
    fn all_outside_prediction() {
        let m = evaluate_tagger(&[vec![O, O, O]], &[vec![B, I, O]]).unwrap();
        assert_eq!((m.precision, m.recall, m.f_measure), (0.0, 0.0, 0.0));
    }

    #[test]
    fn wrong_entity_class_counts_both_ways() {
        let m = evaluate_tagger(&[vec![B]], &[vec![I]]).unwrap();
        assert_eq!((m.precision, m.recall), (0.0, 0.0));
    }

    #[test]
    fn length_mismatch() {
        assert!(evaluate_tagger(&[vec![O]], &[vec![O, O]]).is_err());
        assert!(evaluate_tagger(&[], &[vec![O]]).is_err());
    }

    #[test]
    fn f_identity() {
        for (tp, fp, fn_) in [(3, 1, 2), (0, 5, 0), (7, 0, 0), (1, 1, 1)] {
            let m = TagMetrics::from_counts(tp, fp, fn_);
            if m.precision + m.recall > 0.0 {
                let f = 2.0 * m.precision * m.recall / (m.precision + m.recall);
                assert!((m.f_measure - f).abs() < 1e-15);
            } else {
                assert_eq!(m.f_measure, 0.0);
            }
        }
    }

    #[test]
    fn span_scores() {
        let gold = vec![vec![B, I, O, B]];
        let pred = vec![vec![B, O, O, B]];
        let m = evaluate_spans(&pred, &gold).unwrap();
        assert!((m.precision - 0.5).abs() < 1e-12);
        assert!((m.recall - 0.5).abs() < 1e-12);
    }
}
