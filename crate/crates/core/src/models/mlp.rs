use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_training, Classifier, ModelError};
use crate::corpus::Label;
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlpConfig {
    pub hidden: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl MlpConfig {
    fn validate(&self) -> Result<(), ModelError> {
        if self.hidden == 0 {
            return Err(ModelError::InvalidHyperparameter("hidden size must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(ModelError::InvalidHyperparameter(format!(
                "learning rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(ModelError::InvalidHyperparameter("epochs must be >= 1".into()));
        }
        if self.batch_size == 0 {
            return Err(ModelError::InvalidHyperparameter("batch size must be >= 1".into()));
        }
        Ok(())
    }
}

/// One ReLU hidden layer and a two-way softmax output.
///
/// `w1` is stored input-major: the `hidden` weights fed by input `j` start at
/// `j * hidden`. `w2` is output-major (`c * hidden + k`). Output `c` follows
/// [`Label::index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpClassifier {
    pub input: usize,
    pub hidden: usize,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: [f64; 2],
}

/// Gradient with the same layout as [`MlpClassifier`].
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGradient {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: [f64; 2],
}

impl MlpGradient {
    fn zeros(input: usize, hidden: usize) -> Self {
        Self { w1: vec![0.0; input * hidden], b1: vec![0.0; hidden], w2: vec![0.0; 2 * hidden], b2: [0.0; 2] }
    }

    /// Flattened in [`MlpClassifier::param`] order.
    pub fn flat(&self) -> Vec<f64> {
        let mut out = self.w1.clone();
        out.extend(&self.b1);
        out.extend(&self.w2);
        out.extend(self.b2);
        out
    }
}

struct Forward {
    z1: Vec<f64>,
    h: Vec<f64>,
    logits: [f64; 2],
}

fn log_sum_exp(l: [f64; 2]) -> f64 {
    let m = l[0].max(l[1]);
    m + ((l[0] - m).exp() + (l[1] - m).exp()).ln()
}

impl MlpClassifier {
    /// Glorot-uniform weights, zero biases.
    pub fn init(input: usize, hidden: usize, rng: &mut impl Rng) -> Self {
        let l1 = (6.0 / (input + hidden) as f64).sqrt();
        let l2 = (6.0 / (hidden + 2) as f64).sqrt();
        let w1 = (0..input * hidden).map(|_| rng.gen_range(-l1..=l1)).collect();
        let w2 = (0..2 * hidden).map(|_| rng.gen_range(-l2..=l2)).collect();
        Self { input, hidden, w1, b1: vec![0.0; hidden], w2, b2: [0.0; 2] }
    }

    fn forward(&self, x: &SparseVector) -> Forward {
        let h_n = self.hidden;
        let mut z1 = self.b1.clone();
        for (j, v) in x.iter() {
            let row = &self.w1[j * h_n..(j + 1) * h_n];
            for (z, w) in z1.iter_mut().zip(row) {
                *z += v * w;
            }
        }
        let h: Vec<f64> = z1.iter().map(|&z| if z < 0.0 { 0.0 } else { z }).collect();
        let logits = [0, 1].map(|c| {
            self.b2[c] + self.w2[c * h_n..(c + 1) * h_n].iter().zip(&h).map(|(w, a)| w * a).sum::<f64>()
        });
        Forward { z1, h, logits }
    }

    /// Output logits, Fake first.
    pub fn logits(&self, x: &SparseVector) -> [f64; 2] {
        self.forward(x).logits
    }

    /// Softmax probabilities, Fake first.
    pub fn probabilities(&self, x: &SparseVector) -> [f64; 2] {
        let l = self.logits(x);
        let lse = log_sum_exp(l);
        l.map(|v| (v - lse).exp())
    }

    /// Adds one example's gradient into `g`, returns its cross-entropy.
    /// `touched` collects the input columns whose `w1` rows were written.
    fn backprop(&self, x: &SparseVector, y: Label, g: &mut MlpGradient, touched: Option<(&mut Vec<usize>, &mut [bool])>) -> f64 {
        let h_n = self.hidden;
        let f = self.forward(x);
        let lse = log_sum_exp(f.logits);
        let yi = y.index();
        let loss = lse - f.logits[yi];
        let mut dl = f.logits.map(|v| (v - lse).exp());
        dl[yi] -= 1.0;
        let mut dz1 = vec![0.0; h_n];
        for (c, &d) in dl.iter().enumerate() {
            g.b2[c] += d;
            let w2 = &self.w2[c * h_n..(c + 1) * h_n];
            let g2 = &mut g.w2[c * h_n..(c + 1) * h_n];
            for (k, dz) in dz1.iter_mut().enumerate() {
                g2[k] += d * f.h[k];
                *dz += d * w2[k];
            }
        }
        for ((dz, z), gb) in dz1.iter_mut().zip(&f.z1).zip(&mut g.b1) {
            if *z <= 0.0 {
                *dz = 0.0;
            }
            *gb += *dz;
        }
        if let Some((list, mark)) = touched {
            for &j in x.indices() {
                if !mark[j] {
                    mark[j] = true;
                    list.push(j);
                }
            }
        }
        for (j, v) in x.iter() {
            let row = &mut g.w1[j * h_n..(j + 1) * h_n];
            for (gw, d) in row.iter_mut().zip(&dz1) {
                *gw += v * d;
            }
        }
        loss
    }

    /// Mean cross-entropy over `(xs, ys)` and its exact gradient.
    pub fn loss_and_gradient(&self, xs: &[SparseVector], ys: &[Label]) -> (f64, MlpGradient) {
        let mut g = MlpGradient::zeros(self.input, self.hidden);
        let mut loss = 0.0;
        for (x, y) in xs.iter().zip(ys) {
            loss += self.backprop(x, *y, &mut g, None);
        }
        let n = xs.len().max(1) as f64;
        g.w1.iter_mut().chain(&mut g.b1).chain(&mut g.w2).chain(&mut g.b2).for_each(|v| *v /= n);
        (loss / n, g)
    }

    pub fn loss(&self, xs: &[SparseVector], ys: &[Label]) -> f64 {
        let n = xs.len().max(1) as f64;
        xs.iter()
            .zip(ys)
            .map(|(x, y)| {
                let l = self.logits(x);
                log_sum_exp(l) - l[y.index()]
            })
            .sum::<f64>()
            / n
    }

    pub fn num_params(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + 2
    }

    fn param_slot(&mut self, i: usize) -> &mut f64 {
        let (a, b, c) = (self.w1.len(), self.b1.len(), self.w2.len());
        if i < a {
            &mut self.w1[i]
        } else if i < a + b {
            &mut self.b1[i - a]
        } else if i < a + b + c {
            &mut self.w2[i - a - b]
        } else {
            &mut self.b2[i - a - b - c]
        }
    }

    /// Parameter `i` in the order `w1, b1, w2, b2`.
    pub fn param(&self, i: usize) -> f64 {
        let (a, b, c) = (self.w1.len(), self.b1.len(), self.w2.len());
        if i < a {
            self.w1[i]
        } else if i < a + b {
            self.b1[i - a]
        } else if i < a + b + c {
            self.w2[i - a - b]
        } else {
            self.b2[i - a - b - c]
        }
    }

    pub fn set_param(&mut self, i: usize, value: f64) {
        *self.param_slot(i) = value;
    }
}

impl Classifier for MlpClassifier {
    fn dim(&self) -> usize {
        self.input
    }

    /// Real logit minus Fake logit.
    fn decision_unchecked(&self, x: &SparseVector) -> f64 {
        let l = self.logits(x);
        l[Label::Real.index()] - l[Label::Fake.index()]
    }
}

/// Mini-batch SGD on mean cross-entropy. Only the `w1` rows of inputs present
/// in a batch are updated.
pub fn train_mlp(xs: &[SparseVector], ys: &[Label], config: &MlpConfig) -> Result<MlpClassifier, ModelError> {
    config.validate()?;
    let dim = check_training(xs, ys)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut model = MlpClassifier::init(dim, config.hidden, &mut rng);
    let h_n = config.hidden;
    let mut g = MlpGradient::zeros(dim, h_n);
    let mut touched = Vec::new();
    let mut mark = vec![false; dim];
    let mut order: Vec<usize> = (0..xs.len()).collect();
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(config.batch_size) {
            for &i in batch {
                epoch_loss += model.backprop(&xs[i], ys[i], &mut g, Some((&mut touched, &mut mark)));
            }
            let step = config.learning_rate / batch.len() as f64;
            for &j in &touched {
                let row = &mut model.w1[j * h_n..(j + 1) * h_n];
                let grow = &mut g.w1[j * h_n..(j + 1) * h_n];
                for (w, gw) in row.iter_mut().zip(grow.iter_mut()) {
                    *w -= step * *gw;
                    *gw = 0.0;
                }
                mark[j] = false;
            }
            touched.clear();
            for (w, gw) in model.b1.iter_mut().zip(g.b1.iter_mut()) {
                *w -= step * *gw;
                *gw = 0.0;
            }
            for (w, gw) in model.w2.iter_mut().zip(g.w2.iter_mut()) {
                *w -= step * *gw;
                *gw = 0.0;
            }
            for c in 0..2 {
                model.b2[c] -= step * g.b2[c];
                g.b2[c] = 0.0;
            }
        }
        if !epoch_loss.is_finite() {
            return Err(ModelError::NonFiniteLoss { epoch });
        }
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> (Vec<SparseVector>, Vec<Label>) {
        let xs = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
            .iter()
            .map(|p| SparseVector::from_dense(p))
            .collect();
        (xs, vec![Label::Fake, Label::Real, Label::Real, Label::Fake])
    }

    #[test]
    fn learns_xor() {
        let (xs, ys) = xor();
        let cfg = MlpConfig { hidden: 8, learning_rate: 0.5, epochs: 2000, batch_size: 4, seed: 42 };
        let m = train_mlp(&xs, &ys, &cfg).unwrap();
        assert_eq!(m.predict_batch(&xs).unwrap(), ys);
    }

    #[test]
    fn zero_epochs_rejected() {
        let (xs, ys) = xor();
        let cfg = MlpConfig { hidden: 4, learning_rate: 0.1, epochs: 0, batch_size: 1, seed: 0 };
        assert!(matches!(train_mlp(&xs, &ys, &cfg), Err(ModelError::InvalidHyperparameter(_))));
    }

    #[test]
    fn divergence_guard() {
        let (mut xs, ys) = xor();
        xs[3] = SparseVector::from_dense(&[f64::NAN, 1.0]);
        let cfg = MlpConfig { hidden: 4, learning_rate: 0.1, epochs: 5, batch_size: 1, seed: 1 };
        assert!(matches!(train_mlp(&xs, &ys, &cfg), Err(ModelError::NonFiniteLoss { .. })));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = MlpClassifier::init(4, 5, &mut rng);
        let xs: Vec<SparseVector> = (0..6)
            .map(|_| SparseVector::from_dense(&(0..4).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>()))
            .collect();
        let ys: Vec<Label> = (0..6).map(|i| if i % 3 == 0 { Label::Real } else { Label::Fake }).collect();
        let (_, g) = m.loss_and_gradient(&xs, &ys);
        let analytic = g.flat();
        let eps = 1e-6;
        let mut diff = 0.0;
        let mut norm = 0.0;
        for (i, a) in analytic.iter().enumerate() {
            let mut p = m.clone();
            p.set_param(i, m.param(i) + eps);
            let up = p.loss(&xs, &ys);
            p.set_param(i, m.param(i) - eps);
            let down = p.loss(&xs, &ys);
            let numeric = (up - down) / (2.0 * eps);
            diff += (a - numeric).powi(2);
            norm += (a.abs() + numeric.abs()).powi(2);
        }
        assert!(diff.sqrt() / norm.sqrt() < 1e-4);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = MlpClassifier::init(3, 4, &mut rng);
        let p = m.probabilities(&SparseVector::from_dense(&[0.3, 0.0, -2.0]));
        assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
    }
}
