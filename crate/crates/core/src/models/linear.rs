use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_training, Classifier, ModelError};
use crate::corpus::Label;
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    Hinge,
    Logistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearConfig {
    pub loss: Loss,
    pub lambda: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl LinearConfig {
    pub fn new(loss: Loss, lambda: f64, epochs: usize, seed: u64) -> Self {
        Self { loss, lambda, epochs, seed }
    }

    fn validate(&self) -> Result<(), ModelError> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(ModelError::InvalidHyperparameter(format!("lambda must be > 0, got {}", self.lambda)));
        }
        if self.epochs == 0 {
            return Err(ModelError::InvalidHyperparameter("epochs must be >= 1".into()));
        }
        Ok(())
    }
}

/// `sign(w·x + b)`, trained with Pegasos-style SGD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearClassifier {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub loss: Loss,
    pub lambda: f64,
}

impl LinearClassifier {
    pub fn from_parts(weights: Vec<f64>, bias: f64, loss: Loss, lambda: f64) -> Self {
        Self { weights, bias, loss, lambda }
    }

    /// `λ/2 ‖w‖² + mean loss` over a data set.
    pub fn objective(&self, xs: &[SparseVector], ys: &[Label]) -> f64 {
        let reg = 0.5 * self.lambda * self.weights.iter().map(|w| w * w).sum::<f64>();
        let n = xs.len().max(1) as f64;
        let data: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| {
                let m = y.sign() * self.decision_unchecked(x);
                match self.loss {
                    Loss::Hinge => (1.0 - m).max(0.0),
                    Loss::Logistic => softplus(-m),
                }
            })
            .sum();
        reg + data / n
    }
}

impl Classifier for LinearClassifier {
    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn decision_unchecked(&self, x: &SparseVector) -> f64 {
        x.dot_dense(&self.weights) + self.bias
    }
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `w = scale · v` so the L2 shrink step is O(1).
struct ScaledWeights {
    v: Vec<f64>,
    scale: f64,
}

impl ScaledWeights {
    fn dot(&self, x: &SparseVector) -> f64 {
        self.scale * x.dot_dense(&self.v)
    }

    fn shrink(&mut self, factor: f64) {
        if factor <= 0.0 {
            self.v.iter_mut().for_each(|w| *w = 0.0);
            self.scale = 1.0;
            return;
        }
        self.scale *= factor;
        if self.scale < 1e-9 {
            let s = self.scale;
            self.v.iter_mut().for_each(|w| *w *= s);
            self.scale = 1.0;
        }
    }

    fn add(&mut self, x: &SparseVector, step: f64) {
        let c = step / self.scale;
        for (i, v) in x.iter() {
            self.v[i] += c * v;
        }
    }

    fn into_weights(self) -> Vec<f64> {
        let s = self.scale;
        self.v.into_iter().map(|w| w * s).collect()
    }
}

/// Pegasos SGD: step `t` (1-based, over shuffled examples) uses
/// `η = 1/(λt)`, shrinks `w` by `1 − ηλ` and adds the loss subgradient.
/// The bias takes the same step without shrinkage.
pub fn train_linear(xs: &[SparseVector], ys: &[Label], config: &LinearConfig) -> Result<LinearClassifier, ModelError> {
    train_linear_traced(xs, ys, config, |_, _| {})
}

/// [`train_linear`] calling `on_epoch(epoch, &model)` after every epoch.
pub fn train_linear_traced<F>(
    xs: &[SparseVector],
    ys: &[Label],
    config: &LinearConfig,
    mut on_epoch: F,
) -> Result<LinearClassifier, ModelError>
where
    F: FnMut(usize, &LinearClassifier),
{
    config.validate()?;
    let dim = check_training(xs, ys)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut w = ScaledWeights { v: vec![0.0; dim], scale: 1.0 };
    let mut bias = 0.0;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    let mut t = 0u64;
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (config.lambda * t as f64);
            let x = &xs[i];
            let y = ys[i].sign();
            let margin = y * (w.dot(x) + bias);
            w.shrink(1.0 - eta * config.lambda);
            let g = match config.loss {
                Loss::Hinge => {
                    if margin < 1.0 {
                        1.0
                    } else {
                        0.0
                    }
                }
                Loss::Logistic => sigmoid(-margin),
            };
            if g != 0.0 {
                w.add(x, eta * y * g);
                bias += eta * y * g;
            }
        }
        if !bias.is_finite() {
            return Err(ModelError::NonFiniteLoss { epoch });
        }
        let snapshot = LinearClassifier {
            weights: w.v.iter().map(|v| v * w.scale).collect(),
            bias,
            loss: config.loss,
            lambda: config.lambda,
        };
        on_epoch(epoch, &snapshot);
    }
    Ok(LinearClassifier { weights: w.into_weights(), bias, loss: config.loss, lambda: config.lambda })
}
