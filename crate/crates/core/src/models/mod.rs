//! Classifiers over sparse feature vectors.
//!
//! Labels are encoded Real = +1, Fake = −1. Every model exposes a decision
//! value whose sign gives the prediction; zero predicts Fake.

pub mod forest;
pub mod linear;
pub mod mlp;
pub mod naive_bayes;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::features::SparseVector;

pub use forest::{train_forest, DecisionTree, ForestConfig, RandomForest};
pub use linear::{train_linear, train_linear_traced, LinearClassifier, LinearConfig, Loss};
pub use mlp::{train_mlp, MlpClassifier, MlpConfig, MlpGradient};
pub use naive_bayes::{train_nb, NbClassifier};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("{examples} examples but {labels} labels")]
    LengthMismatch { examples: usize, labels: usize },
    #[error("training set contains a single class")]
    SingleClass,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative feature value at example {example}, column {column}")]
    NegativeFeature { example: usize, column: usize },
    #[error("loss became non-finite in epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
}

/// Uniform prediction interface.
pub trait Classifier {
    /// Input dimension the model was trained on.
    fn dim(&self) -> usize;

    /// Positive means Real. Assumes `x.dim() == self.dim()`.
    fn decision_unchecked(&self, x: &SparseVector) -> f64;

    fn decision_value(&self, x: &SparseVector) -> Result<f64, ModelError> {
        check_dim(x, self.dim())?;
        Ok(self.decision_unchecked(x))
    }

    fn predict(&self, x: &SparseVector) -> Result<Label, ModelError> {
        self.decision_value(x).map(label_of)
    }

    fn predict_batch(&self, xs: &[SparseVector]) -> Result<Vec<Label>, ModelError> {
        xs.iter().map(|x| self.predict(x)).collect()
    }
}

/// Real for a strictly positive decision value, otherwise Fake.
pub fn label_of(decision: f64) -> Label {
    if decision > 0.0 {
        Label::Real
    } else {
        Label::Fake
    }
}

pub(crate) fn check_dim(x: &SparseVector, expected: usize) -> Result<(), ModelError> {
    if x.dim() == expected {
        Ok(())
    } else {
        Err(ModelError::DimensionMismatch { expected, found: x.dim() })
    }
}

/// Validates a training set and returns its dimension.
pub(crate) fn check_training(xs: &[SparseVector], ys: &[Label]) -> Result<usize, ModelError> {
    if xs.len() != ys.len() {
        return Err(ModelError::LengthMismatch { examples: xs.len(), labels: ys.len() });
    }
    let first = xs.first().ok_or(ModelError::EmptyTrainingSet)?;
    let dim = first.dim();
    for x in xs {
        check_dim(x, dim)?;
    }
    if !(ys.contains(&Label::Real) && ys.contains(&Label::Fake)) {
        return Err(ModelError::SingleClass);
    }
    Ok(dim)
}

/// Any trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Linear(LinearClassifier),
    NaiveBayes(NbClassifier),
    Mlp(MlpClassifier),
    Forest(RandomForest),
}

impl Classifier for Model {
    fn dim(&self) -> usize {
        match self {
            Model::Linear(m) => m.dim(),
            Model::NaiveBayes(m) => m.dim(),
            Model::Mlp(m) => m.dim(),
            Model::Forest(m) => m.dim(),
        }
    }

    fn decision_unchecked(&self, x: &SparseVector) -> f64 {
        match self {
            Model::Linear(m) => m.decision_unchecked(x),
            Model::NaiveBayes(m) => m.decision_unchecked(x),
            Model::Mlp(m) => m.decision_unchecked(x),
            Model::Forest(m) => m.decision_unchecked(x),
        }
    }
}
