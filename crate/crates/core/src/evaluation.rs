//! Confusion matrix and support-weighted precision, recall and F1.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("length mismatch: {truth} gold labels, {predicted} predictions")]
    LengthMismatch { truth: usize, predicted: usize },
    #[error("no labels to evaluate")]
    Empty,
    #[error("confusion matrix is empty")]
    EmptyMatrix,
}

/// `counts[true][predicted]`, labels indexed by [`Label::index`] (Fake, Real).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 2]; 2],
}

impl ConfusionMatrix {
    pub fn get(&self, truth: Label, predicted: Label) -> u64 {
        self.counts[truth.index()][predicted.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        self.counts[0][0] + self.counts[1][1]
    }

    /// Aligned text table, gold labels as rows.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<12}{:>10}{:>10}", "gold\\pred", "fake", "real");
        for t in Label::ALL {
            let _ = writeln!(out, "{:<12}{:>10}{:>10}", t.as_str(), self.get(t, Label::Fake), self.get(t, Label::Real));
        }
        out
    }
}

pub fn confusion_matrix(y_true: &[Label], y_pred: &[Label]) -> Result<ConfusionMatrix, EvalError> {
    if y_true.len() != y_pred.len() {
        return Err(EvalError::LengthMismatch { truth: y_true.len(), predicted: y_pred.len() });
    }
    if y_true.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut cm = ConfusionMatrix::default();
    for (t, p) in y_true.iter().zip(y_pred) {
        cm.counts[t.index()][p.index()] += 1;
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: Label,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    pub per_class: [ClassMetrics; 2],
    pub confusion: ConfusionMatrix,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-class and support-weighted metrics. Zero denominators give 0.
pub fn weighted_metrics(cm: &ConfusionMatrix) -> Result<EvalReport, EvalError> {
    let n = cm.total();
    if n == 0 {
        return Err(EvalError::EmptyMatrix);
    }
    let per_class = Label::ALL.map(|c| {
        let i = c.index();
        let tp = cm.counts[i][i];
        let support = cm.counts[i][0] + cm.counts[i][1];
        let predicted = cm.counts[0][i] + cm.counts[1][i];
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        ClassMetrics { label: c, precision, recall, f1, support }
    });
    let weighted = |f: fn(&ClassMetrics) -> f64| {
        per_class.iter().map(|m| m.support as f64 / n as f64 * f(m)).sum::<f64>()
    };
    let accuracy = ratio(cm.trace(), n);
    Ok(EvalReport {
        accuracy,
        weighted_precision: weighted(|m| m.precision),
        // Σ (n_c / N)(TP_c / n_c) reduces to trace / N
        weighted_recall: accuracy,
        weighted_f1: weighted(|m| m.f1),
        per_class,
        confusion: *cm,
    })
}

/// Confusion matrix and metrics in one step.
pub fn evaluate(y_true: &[Label], y_pred: &[Label]) -> Result<EvalReport, EvalError> {
    weighted_metrics(&confusion_matrix(y_true, y_pred)?)
}

impl EvalReport {
    pub const TABLE_HEADER: &'static str = "Model        Acc      P        R        F1";

    /// `name acc p r f1` as percentages with two decimals.
    pub fn table_row(&self, name: &str) -> String {
        format!(
            "{:<8}{:>8.2} {:>8.2} {:>8.2} {:>8.2}",
            name,
            100.0 * self.accuracy,
            100.0 * self.weighted_precision,
            100.0 * self.weighted_recall,
            100.0 * self.weighted_f1
        )
    }

    /// Per-class rows followed by the weighted averages.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<10}{:>10}{:>10}{:>10}{:>10}", "class", "precision", "recall", "f1", "support");
        for m in &self.per_class {
            let _ = writeln!(
                out,
                "{:<10}{:>10.2}{:>10.2}{:>10.2}{:>10}",
                m.label.as_str(),
                100.0 * m.precision,
                100.0 * m.recall,
                100.0 * m.f1,
                m.support
            );
        }
        let _ = writeln!(
            out,
            "{:<10}{:>10.2}{:>10.2}{:>10.2}{:>10}",
            "weighted",
            100.0 * self.weighted_precision,
            100.0 * self.weighted_recall,
            100.0 * self.weighted_f1,
            self.confusion.total()
        );
        let _ = writeln!(out, "accuracy  {:>10.2}", 100.0 * self.accuracy);
        out
    }

    /// `key=value` lines with four decimals.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "accuracy={:.4}", self.accuracy);
        let _ = writeln!(out, "weighted_precision={:.4}", self.weighted_precision);
        let _ = writeln!(out, "weighted_recall={:.4}", self.weighted_recall);
        let _ = writeln!(out, "weighted_f1={:.4}", self.weighted_f1);
        for m in &self.per_class {
            let l = m.label.as_str();
            let _ = writeln!(out, "{l}_precision={:.4}", m.precision);
            let _ = writeln!(out, "{l}_recall={:.4}", m.recall);
            let _ = writeln!(out, "{l}_f1={:.4}", m.f1);
            let _ = writeln!(out, "{l}_support={}", m.support);
        }
        for t in Label::ALL {
            for p in Label::ALL {
                let _ = writeln!(out, "confusion_{}_{}={}", t.as_str(), p.as_str(), self.confusion.get(t, p));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Label::{Fake as F, Real as R};

    #[test]
    fn perfect() {
        let r = evaluate(&[R, F], &[R, F]).unwrap();
        assert_eq!(r.confusion.counts, [[1, 0], [0, 1]]);
        assert_eq!((r.accuracy, r.weighted_precision, r.weighted_recall, r.weighted_f1), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn four_example_case() {
        let cm = confusion_matrix(&[R, R, R, F], &[R, F, R, F]).unwrap();
        assert_eq!(cm.get(R, R), 2);
        assert_eq!(cm.get(R, F), 1);
        assert_eq!(cm.get(F, F), 1);
        assert_eq!(cm.get(F, R), 0);
        let r = weighted_metrics(&cm).unwrap();
        assert_eq!(r.accuracy, 0.75);
        assert!((r.weighted_precision - 0.875).abs() < 1e-12);
        assert_eq!(r.weighted_recall, 0.75);
        assert!((r.weighted_f1 - 0.766_666_666_666_666_7).abs() < 1e-12);
        assert!(r.to_kv().contains("weighted_f1=0.7667"));
        assert!(r.table_row("SVM").contains("76.67"));
    }

    #[test]
    fn never_predicted_class() {
        let r = evaluate(&[R, F], &[R, R]).unwrap();
        assert_eq!(r.per_class[F.index()].precision, 0.0);
        assert_eq!(r.per_class[F.index()].f1, 0.0);
        assert!(r.weighted_f1.is_finite());
    }

    #[test]
    fn errors() {
        assert_eq!(evaluate(&[], &[]), Err(EvalError::Empty));
        assert_eq!(evaluate(&[R], &[]), Err(EvalError::LengthMismatch { truth: 1, predicted: 0 }));
        assert_eq!(weighted_metrics(&ConfusionMatrix::default()), Err(EvalError::EmptyMatrix));
    }

    fn labels(n: usize) -> impl Strategy<Value = Vec<Label>> {
        prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { R } else { F }), n)
    }

    proptest! {
        #[test]
        fn recall_is_accuracy_and_f1_bounded(pairs in (1usize..60).prop_flat_map(|n| (labels(n), labels(n)))) {
            let r = evaluate(&pairs.0, &pairs.1).unwrap();
            prop_assert_eq!(r.weighted_recall, r.accuracy);
            let lo = r.per_class.iter().map(|m| m.f1).fold(f64::INFINITY, f64::min);
            let hi = r.per_class.iter().map(|m| m.f1).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(lo - 1e-12 <= r.weighted_f1 && r.weighted_f1 <= hi + 1e-12);
        }

        #[test]
        fn joint_permutation_invariance(pairs in (1usize..40).prop_flat_map(|n| (labels(n), labels(n))), rot in 0usize..40) {
            let (t, p) = pairs;
            let k = rot % t.len();
            let mut t2 = t.clone();
            let mut p2 = p.clone();
            t2.rotate_left(k);
            p2.rotate_left(k);
            t2.reverse();
            p2.reverse();
            prop_assert_eq!(evaluate(&t, &p).unwrap(), evaluate(&t2, &p2).unwrap());
        }
    }
}
