use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{CorpusError, DatasetSplit, Label};
use crate::evaluation::{evaluate, EvalError, EvalReport};
use crate::features::{FeatureError, FeatureUnion, FeatureUnionConfig, SparseVector};
use crate::models::{
    train_forest, train_linear, train_mlp, train_nb, Classifier, ForestConfig, LinearConfig, Loss, MlpConfig,
    Model, ModelError,
};
use crate::resources::Resources;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Svm,
    Lr,
    Nb,
    Rf,
    Mlp,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [ModelKind::Svm, ModelKind::Lr, ModelKind::Nb, ModelKind::Rf, ModelKind::Mlp];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Svm => "SVM",
            ModelKind::Lr => "LR",
            ModelKind::Nb => "NB",
            ModelKind::Rf => "RF",
            ModelKind::Mlp => "MLP",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "svm" => Ok(ModelKind::Svm),
            "lr" | "logreg" | "logistic" => Ok(ModelKind::Lr),
            "nb" | "naive_bayes" => Ok(ModelKind::Nb),
            "rf" | "forest" | "random_forest" => Ok(ModelKind::Rf),
            "mlp" => Ok(ModelKind::Mlp),
            other => Err(format!("unknown model kind `{other}`")),
        }
    }
}

fn default_lambda() -> f64 {
    1e-4
}
fn default_linear_epochs() -> usize {
    20
}
fn default_alpha() -> f64 {
    1.0
}
fn default_trees() -> usize {
    100
}
fn default_hidden() -> usize {
    64
}
fn default_learning_rate() -> f64 {
    0.1
}
fn default_mlp_epochs() -> usize {
    10
}
fn default_batch() -> usize {
    32
}

/// Model family with its hyperparameters. Omitted fields take defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSpec {
    Svm {
        #[serde(default = "default_lambda")]
        lambda: f64,
        #[serde(default = "default_linear_epochs")]
        epochs: usize,
    },
    Lr {
        #[serde(default = "default_lambda")]
        lambda: f64,
        #[serde(default = "default_linear_epochs")]
        epochs: usize,
    },
    Nb {
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    Rf {
        #[serde(default = "default_trees")]
        n_trees: usize,
        /// Absent means unlimited.
        #[serde(default)]
        max_depth: Option<usize>,
    },
    Mlp {
        #[serde(default = "default_hidden")]
        hidden: usize,
        #[serde(default = "default_learning_rate")]
        learning_rate: f64,
        #[serde(default = "default_mlp_epochs")]
        epochs: usize,
        #[serde(default = "default_batch")]
        batch_size: usize,
    },
}

impl ModelSpec {
    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Svm => ModelSpec::Svm { lambda: default_lambda(), epochs: default_linear_epochs() },
            ModelKind::Lr => ModelSpec::Lr { lambda: default_lambda(), epochs: default_linear_epochs() },
            ModelKind::Nb => ModelSpec::Nb { alpha: default_alpha() },
            ModelKind::Rf => ModelSpec::Rf { n_trees: default_trees(), max_depth: None },
            ModelKind::Mlp => ModelSpec::Mlp {
                hidden: default_hidden(),
                learning_rate: default_learning_rate(),
                epochs: default_mlp_epochs(),
                batch_size: default_batch(),
            },
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Svm { .. } => ModelKind::Svm,
            ModelSpec::Lr { .. } => ModelKind::Lr,
            ModelSpec::Nb { .. } => ModelKind::Nb,
            ModelSpec::Rf { .. } => ModelKind::Rf,
            ModelSpec::Mlp { .. } => ModelKind::Mlp,
        }
    }

    pub fn train(&self, xs: &[SparseVector], ys: &[Label], seed: u64) -> Result<Model, ModelError> {
        Ok(match *self {
            ModelSpec::Svm { lambda, epochs } => {
                Model::Linear(train_linear(xs, ys, &LinearConfig::new(Loss::Hinge, lambda, epochs, seed))?)
            }
            ModelSpec::Lr { lambda, epochs } => {
                Model::Linear(train_linear(xs, ys, &LinearConfig::new(Loss::Logistic, lambda, epochs, seed))?)
            }
            ModelSpec::Nb { alpha } => Model::NaiveBayes(train_nb(xs, ys, alpha)?),
            ModelSpec::Rf { n_trees, max_depth } => {
                Model::Forest(train_forest(xs, ys, &ForestConfig::new(n_trees, max_depth, seed))?)
            }
            ModelSpec::Mlp { hidden, learning_rate, epochs, batch_size } => Model::Mlp(train_mlp(
                xs,
                ys,
                &MlpConfig { hidden, learning_rate, epochs, batch_size, seed },
            )?),
        })
    }
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self::default_for(ModelKind::Svm)
    }
}

pub const DEFAULT_SEED: u64 = 42;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Complete description of one preprocessing, feature and model setup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub model: ModelSpec,
    #[serde(default)]
    pub features: FeatureUnionConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, model: ModelSpec::default(), features: FeatureUnionConfig::default() }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("invalid config: {0}")]
    Config(String),
}

impl PipelineConfig {
    /// Compact JSON with fields in declaration order.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    /// Canonical form with the seed set to 0.
    pub fn canonical_without_seed(&self) -> String {
        let mut c = self.clone();
        c.seed = 0;
        c.canonical()
    }

    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))
    }

    /// Fails for seeds above `i64::MAX`, which TOML cannot represent.
    pub fn to_toml(&self) -> Result<String, PipelineError> {
        toml::to_string(self).map_err(|e| PipelineError::Config(e.to_string()))
    }
}

/// First eight bytes of the SHA-256 of `text`, big-endian.
pub fn config_hash(text: &str) -> u64 {
    let digest = Sha256::digest(text.as_bytes());
    u64::from_be_bytes(digest[..8].try_into().unwrap())
}

/// Fitted features plus trained model.
#[derive(Debug, Clone)]
pub struct TrainedPipeline {
    pub config: PipelineConfig,
    pub features: FeatureUnion,
    pub model: Model,
}

pub type ModelArtifact = TrainedPipeline;

impl TrainedPipeline {
    pub fn train(config: &PipelineConfig, resources: &Resources, train: &DatasetSplit) -> Result<Self, PipelineError> {
        let ys = train.labels()?;
        let mut features = FeatureUnion::new(config.features.clone(), resources.clone())?;
        let xs = features.fit_transform(&train.texts())?;
        let model = config.model.train(&xs, &ys, config.seed)?;
        Ok(Self { config: config.clone(), features, model })
    }

    /// Trains from already fitted features and their training vectors.
    pub fn train_on_features(
        config: &PipelineConfig,
        features: FeatureUnion,
        xs: &[SparseVector],
        ys: &[Label],
    ) -> Result<Self, PipelineError> {
        let model = config.model.train(xs, ys, config.seed)?;
        Ok(Self { config: config.clone(), features, model })
    }

    pub fn transform<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Result<Vec<SparseVector>, PipelineError> {
        Ok(self.features.transform_batch(texts)?)
    }

    pub fn predict_texts<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Result<Vec<Label>, PipelineError> {
        let xs = self.transform(texts)?;
        Ok(self.model.predict_batch(&xs)?)
    }

    pub fn decision_values<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Result<Vec<f64>, PipelineError> {
        let xs = self.transform(texts)?;
        xs.iter().map(|x| self.model.decision_value(x).map_err(Into::into)).collect()
    }

    pub fn evaluate(&self, split: &DatasetSplit) -> Result<EvalReport, PipelineError> {
        let gold = split.labels()?;
        let pred = self.predict_texts(&split.texts())?;
        Ok(evaluate(&gold, &pred)?)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::corpus::{LabeledPost, SplitName};

    pub(crate) fn toy_split() -> DatasetSplit {
        let rows = [
            ("1", "Wash your hands and wear masks, says the health ministry.", Label::Real),
            ("2", "New cases reported today in 12 states; testing continues.", Label::Real),
            ("3", "Vaccine trial results published in a peer reviewed journal.", Label::Real),
            ("4", "Drinking hot water with garlic cures the virus!!! Share now!", Label::Fake),
            ("5", "5G towers spread the virus, they don't want you to know!", Label::Fake),
            ("6", "Miracle pill kills covid in one day?! Doctors hate it!", Label::Fake),
        ];
        DatasetSplit::new(
            SplitName::Train,
            rows.iter().map(|(id, t, l)| LabeledPost::new(*id, *t, Some(*l))).collect(),
        )
    }

    #[test]
    fn toml_defaults_fill_in() {
        let c = PipelineConfig::from_toml("[model]\nkind = \"nb\"\n").unwrap();
        assert_eq!(c.model, ModelSpec::Nb { alpha: 1.0 });
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.features, FeatureUnionConfig::model_a());
        assert!(PipelineConfig::from_toml("[model]\nkind = \"nb\"\nlambda = 1.0\n").is_err());
        assert!(PipelineConfig::from_toml("bogus = 1\n").is_err());
    }

    #[test]
    fn toml_round_trip() {
        for kind in ModelKind::ALL {
            let c = PipelineConfig { model: ModelSpec::default_for(kind), ..Default::default() };
            assert_eq!(PipelineConfig::from_toml(&c.to_toml().unwrap()).unwrap(), c);
        }
    }

    #[test]
    fn canonical_is_stable() {
        let a = PipelineConfig::default();
        assert_eq!(a.canonical(), a.clone().canonical());
        let mut b = a.clone();
        b.seed = 7;
        assert_ne!(a.canonical(), b.canonical());
        assert_eq!(a.canonical_without_seed(), b.canonical_without_seed());
        assert_ne!(config_hash("a"), config_hash("b"));
    }

    #[test]
    fn every_kind_trains_on_toy_data() {
        let split = toy_split();
        for kind in ModelKind::ALL {
            let mut model = ModelSpec::default_for(kind);
            if let ModelSpec::Rf { n_trees, .. } = &mut model {
                *n_trees = 5;
            }
            let c = PipelineConfig { model, ..Default::default() };
            let p = TrainedPipeline::train(&c, &Resources::default(), &split).unwrap();
            let report = p.evaluate(&split).unwrap();
            assert!(report.accuracy >= 0.5, "{kind}: {}", report.accuracy);
        }
    }
}
