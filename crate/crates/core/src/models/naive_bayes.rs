use serde::{Deserialize, Serialize};

use super::{check_training, Classifier, ModelError};
use crate::corpus::Label;
use crate::features::SparseVector;

/// Multinomial naive Bayes. Arrays are indexed by [`Label::index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbClassifier {
    pub class_log_prior: [f64; 2],
    pub feature_log_prob: [Vec<f64>; 2],
    pub alpha: f64,
}

impl NbClassifier {
    /// Unnormalised `ln P(c) + Σ_j x_j ln P(j | c)` for each class.
    pub fn joint_log_likelihood(&self, x: &SparseVector) -> [f64; 2] {
        [0, 1].map(|c| self.class_log_prior[c] + x.dot_dense(&self.feature_log_prob[c]))
    }
}

impl Classifier for NbClassifier {
    fn dim(&self) -> usize {
        self.feature_log_prob[0].len()
    }

    /// Log-odds of Real over Fake.
    fn decision_unchecked(&self, x: &SparseVector) -> f64 {
        let jll = self.joint_log_likelihood(x);
        jll[Label::Real.index()] - jll[Label::Fake.index()]
    }
}

/// `ln((Σ_{i∈c} x_ij + α) / (Σ_j Σ_{i∈c} x_ij + αV))`, prior `ln(n_c / n)`.
pub fn train_nb(xs: &[SparseVector], ys: &[Label], alpha: f64) -> Result<NbClassifier, ModelError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(ModelError::InvalidHyperparameter(format!("alpha must be > 0, got {alpha}")));
    }
    let dim = check_training(xs, ys)?;
    let mut sums = [vec![0.0; dim], vec![0.0; dim]];
    let mut counts = [0usize; 2];
    for (example, (x, y)) in xs.iter().zip(ys).enumerate() {
        let c = y.index();
        counts[c] += 1;
        for (column, v) in x.iter() {
            if v < 0.0 {
                return Err(ModelError::NegativeFeature { example, column });
            }
            sums[c][column] += v;
        }
    }
    let n = xs.len() as f64;
    let class_log_prior = counts.map(|c| (c as f64 / n).ln());
    let feature_log_prob = sums.map(|s| {
        let total: f64 = s.iter().sum::<f64>() + alpha * dim as f64;
        let log_total = total.ln();
        s.into_iter().map(|v| (v + alpha).ln() - log_total).collect()
    });
    Ok(NbClassifier { class_log_prior, feature_log_prob, alpha })
}
