use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use toml::Value;

use super::pipeline::{config_hash, ModelKind, ModelSpec, PipelineConfig, TrainedPipeline, DEFAULT_SEED};
use crate::corpus::{CorpusError, DatasetSplit, Label};
use crate::evaluation::{evaluate, EvalReport};
use crate::features::{FeatureFamily, FeatureUnion, NgramRange, SparseVector};
use crate::textprep::PrepConfig;
use crate::resources::Resources;

#[derive(Debug, thiserror::Error)]
pub enum GridError {
    #[error("axis `{0}` has no values")]
    EmptyAxis(String),
    #[error("unknown axis `{0}`")]
    UnknownAxis(String),
    #[error("axis `{axis}`: invalid value {value}: {reason}")]
    InvalidValue { axis: String, value: String, reason: String },
    #[error("invalid grid spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Ordered axes over a base configuration.
///
/// TOML form:
///
/// ```toml
/// seed = 42
/// [base.model]
/// kind = "svm"
/// [axes]
/// lambda = [1e-5, 1e-4]
/// ngram_hi = [1, 2]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub seed: u64,
    pub base: PipelineConfig,
    pub axes: Vec<(String, Vec<Value>)>,
}

impl GridSpec {
    pub fn new(seed: u64, base: PipelineConfig) -> Self {
        Self { seed, base, axes: Vec::new() }
    }

    pub fn axis<I, V>(mut self, name: &str, values: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: Into<Value>,
    {
        self.axes.push((name.to_string(), values.into_iter().map(Into::into).collect()));
        self
    }

    pub fn from_toml(text: &str) -> Result<Self, GridError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| GridError::Spec(e.to_string()))?;
        let mut spec = GridSpec::new(DEFAULT_SEED, PipelineConfig::default());
        for (key, value) in table {
            match key.as_str() {
                "seed" => {
                    spec.seed = value
                        .as_integer()
                        .and_then(|i| u64::try_from(i).ok())
                        .ok_or_else(|| GridError::Spec("seed must be a non-negative integer".into()))?;
                }
                "base" => {
                    spec.base = value.try_into().map_err(|e: toml::de::Error| GridError::Spec(e.to_string()))?;
                }
                "axes" => {
                    let Value::Table(axes) = value else {
                        return Err(GridError::Spec("`axes` must be a table".into()));
                    };
                    for (name, values) in axes {
                        let Value::Array(values) = values else {
                            return Err(GridError::Spec(format!("axis `{name}` must be an array")));
                        };
                        spec.axes.push((name, values));
                    }
                }
                other => return Err(GridError::Spec(format!("unknown key `{other}`"))),
            }
        }
        Ok(spec)
    }

    /// Number of configurations, the product of the axis sizes.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|(_, v)| v.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn invalid(axis: &str, value: &Value, reason: &str) -> GridError {
    GridError::InvalidValue { axis: axis.to_string(), value: value.to_string(), reason: reason.to_string() }
}

fn as_f64(axis: &str, v: &Value) -> Result<f64, GridError> {
    match v {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(invalid(axis, v, "expected a number")),
    }
}

fn as_usize(axis: &str, v: &Value) -> Result<usize, GridError> {
    v.as_integer()
        .and_then(|i| usize::try_from(i).ok())
        .ok_or_else(|| invalid(axis, v, "expected a non-negative integer"))
}

fn as_bool(axis: &str, v: &Value) -> Result<bool, GridError> {
    v.as_bool().ok_or_else(|| invalid(axis, v, "expected a boolean"))
}

fn as_str<'a>(axis: &str, v: &'a Value) -> Result<&'a str, GridError> {
    v.as_str().ok_or_else(|| invalid(axis, v, "expected a string"))
}

fn parse_with<T, E: std::fmt::Display>(axis: &str, v: &Value, f: impl Fn(&str) -> Result<T, E>) -> Result<T, GridError> {
    f(as_str(axis, v)?).map_err(|e| invalid(axis, v, &e.to_string()))
}

fn str_list<T, E: std::fmt::Display>(axis: &str, v: &Value, f: impl Fn(&str) -> Result<T, E>) -> Result<Vec<T>, GridError> {
    let items = v.as_array().ok_or_else(|| invalid(axis, v, "expected an array of strings"))?;
    items.iter().map(|item| parse_with(axis, item, &f)).collect()
}

fn parse_family(s: &str) -> Result<FeatureFamily, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "ngrams" | "n-grams" | "ngram" => Ok(FeatureFamily::Ngrams),
        "readability" => Ok(FeatureFamily::Readability),
        "lexicon" | "emotional" | "tone" => Ok(FeatureFamily::Lexicon),
        "punctuation" | "punct" => Ok(FeatureFamily::Punctuation),
        other => Err(format!("unknown feature family `{other}`")),
    }
}

fn apply_prep(prep: &mut PrepConfig, axis: &str, field: &str, v: &Value) -> Result<(), GridError> {
    match field {
        "remove_stopwords" => prep.remove_stopwords = as_bool(axis, v)?,
        "remove_links" => prep.remove_links = as_bool(axis, v)?,
        "remove_replies" => prep.remove_replies = as_bool(axis, v)?,
        "stem_or_lemma" => prep.stem_or_lemma = parse_with(axis, v, str::parse)?,
        "tokenizer" => prep.tokenizer = parse_with(axis, v, str::parse)?,
        _ => return Err(GridError::UnknownAxis(axis.to_string())),
    }
    Ok(())
}

/// Sets one axis value on `config`. Model hyperparameters that do not belong
/// to the current model kind are ignored.
pub fn apply_axis(config: &mut PipelineConfig, axis: &str, v: &Value) -> Result<(), GridError> {
    let f = &mut config.features;
    match (axis, &mut config.model) {
        ("model", m) => *m = ModelSpec::default_for(parse_with(axis, v, str::parse::<ModelKind>)?),
        ("lambda", ModelSpec::Svm { lambda, .. } | ModelSpec::Lr { lambda, .. }) => *lambda = as_f64(axis, v)?,
        (
            "epochs",
            ModelSpec::Svm { epochs, .. } | ModelSpec::Lr { epochs, .. } | ModelSpec::Mlp { epochs, .. },
        ) => *epochs = as_usize(axis, v)?,
        ("alpha", ModelSpec::Nb { alpha }) => *alpha = as_f64(axis, v)?,
        ("n_trees", ModelSpec::Rf { n_trees, .. }) => *n_trees = as_usize(axis, v)?,
        ("max_depth", ModelSpec::Rf { max_depth, .. }) => {
            *max_depth = match v {
                Value::String(s) if matches!(s.as_str(), "none" | "inf" | "unlimited") => None,
                _ => Some(as_usize(axis, v)?),
            }
        }
        ("hidden", ModelSpec::Mlp { hidden, .. }) => *hidden = as_usize(axis, v)?,
        ("learning_rate", ModelSpec::Mlp { learning_rate, .. }) => *learning_rate = as_f64(axis, v)?,
        ("batch_size", ModelSpec::Mlp { batch_size, .. }) => *batch_size = as_usize(axis, v)?,
        ("lambda" | "epochs" | "alpha" | "n_trees" | "max_depth" | "hidden" | "learning_rate" | "batch_size", _) => {}
        ("ngram_lo", _) => {
            f.ngram_range = NgramRange::new(as_usize(axis, v)?, f.ngram_range.hi())
                .map_err(|e| invalid(axis, v, &e.to_string()))?
        }
        ("ngram_hi", _) => {
            f.ngram_range = NgramRange::new(f.ngram_range.lo(), as_usize(axis, v)?)
                .map_err(|e| invalid(axis, v, &e.to_string()))?
        }
        ("ngram_range", _) => {
            let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| invalid(axis, v, "expected [lo, hi]"))?;
            f.ngram_range = NgramRange::new(as_usize(axis, &pair[0])?, as_usize(axis, &pair[1])?)
                .map_err(|e| invalid(axis, v, &e.to_string()))?
        }
        ("min_df", _) => f.min_df = as_usize(axis, v)?,
        ("use_ngrams", _) => f.use_ngrams = as_bool(axis, v)?,
        ("features", _) => {
            let s = as_str(axis, v)?;
            let families: Vec<FeatureFamily> = if s.eq_ignore_ascii_case("all") {
                vec![FeatureFamily::Ngrams, FeatureFamily::Readability, FeatureFamily::Lexicon, FeatureFamily::Punctuation]
            } else {
                s.split('+').map(parse_family).collect::<Result<_, _>>().map_err(|e| invalid(axis, v, &e))?
            };
            *f = f.clone().restrict(&families);
        }
        ("readability", _) => f.use_readability = str_list(axis, v, str::parse)?,
        ("lexicon", _) => f.use_lexicon = str_list(axis, v, |s| Ok::<_, String>(s.to_string()))?,
        ("punctuation", _) => f.use_punctuation = str_list(axis, v, str::parse)?,
        (name, _) => {
            if let Some(field) = name.strip_prefix("ngrams.") {
                apply_prep(&mut f.prep_for_ngrams, axis, field, v)?;
            } else if let Some(field) = name.strip_prefix("dense.") {
                apply_prep(&mut f.prep_for_dense, axis, field, v)?;
            } else {
                apply_prep(&mut f.prep_for_ngrams, axis, name, v)?;
                apply_prep(&mut f.prep_for_dense, axis, name, v)?;
            }
        }
    }
    Ok(())
}

/// Cartesian product of the axes, first axis varying slowest. The `model`
/// axis is applied before the others so hyperparameter axes see the chosen
/// kind. Each config gets `seed XOR hash(canonical config without seed)`.
pub fn enumerate_grid(spec: &GridSpec) -> Result<Vec<PipelineConfig>, GridError> {
    if let Some((name, _)) = spec.axes.iter().find(|(_, v)| v.is_empty()) {
        return Err(GridError::EmptyAxis(name.clone()));
    }
    let sizes: Vec<usize> = spec.axes.iter().map(|(_, v)| v.len()).collect();
    let total = spec.len();
    let model_axes: Vec<usize> = (0..spec.axes.len()).filter(|&a| spec.axes[a].0 == "model").collect();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; sizes.len()];
    for _ in 0..total {
        let mut config = spec.base.clone();
        let order = model_axes.iter().copied().chain((0..sizes.len()).filter(|a| !model_axes.contains(a)));
        for a in order {
            let (name, values) = &spec.axes[a];
            apply_axis(&mut config, name, &values[digits[a]])?;
        }
        config.seed = spec.seed ^ config_hash(&config.canonical_without_seed());
        out.push(config);
        for a in (0..sizes.len()).rev() {
            digits[a] += 1;
            if digits[a] < sizes[a] {
                break;
            }
            digits[a] = 0;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridEntry {
    pub config: PipelineConfig,
    pub canonical: String,
    /// Validation report, or the error that stopped this config.
    pub outcome: Result<EvalReport, String>,
    pub seconds: f64,
}

impl GridEntry {
    pub fn f1(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|r| r.weighted_f1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    /// In enumeration order.
    pub entries: Vec<GridEntry>,
    /// Highest weighted F1; ties go to the smaller canonical string.
    pub best: Option<usize>,
}

impl GridResult {
    pub fn best_entry(&self) -> Option<&GridEntry> {
        self.best.map(|i| &self.entries[i])
    }

    /// Per-entry reports, ignoring timings.
    pub fn reports(&self) -> Vec<(&str, &Result<EvalReport, String>)> {
        self.entries.iter().map(|e| (e.canonical.as_str(), &e.outcome)).collect()
    }

    /// `config,f1,precision,recall,accuracy,seconds,error`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["config", "f1", "precision", "recall", "accuracy", "seconds", "error"])?;
        for e in &self.entries {
            let seconds = format!("{:.3}", e.seconds);
            match &e.outcome {
                Ok(r) => w.write_record([
                    e.canonical.as_str(),
                    &format!("{:.6}", r.weighted_f1),
                    &format!("{:.6}", r.weighted_precision),
                    &format!("{:.6}", r.weighted_recall),
                    &format!("{:.6}", r.accuracy),
                    &seconds,
                    "",
                ])?,
                Err(msg) => w.write_record([e.canonical.as_str(), "", "", "", "", &seconds, msg.as_str()])?,
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub fn select_best(entries: &[GridEntry]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, e) in entries.iter().enumerate() {
        let Some(f1) = e.f1() else { continue };
        best = match best {
            None => Some(i),
            Some(b) => {
                let bf = entries[b].f1().unwrap();
                if f1 > bf || (f1 == bf && e.canonical < entries[b].canonical) {
                    Some(i)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}

struct Prepared {
    train_x: Vec<SparseVector>,
    val_x: Vec<SparseVector>,
}

fn prepare(config: &PipelineConfig, resources: &Resources, train: &[&str], val: &[&str]) -> Result<Prepared, String> {
    let mut features = FeatureUnion::new(config.features.clone(), resources.clone()).map_err(|e| e.to_string())?;
    let train_x = features.fit_transform(train).map_err(|e| e.to_string())?;
    let val_x = features.transform_batch(val).map_err(|e| e.to_string())?;
    Ok(Prepared { train_x, val_x })
}

fn score(config: &PipelineConfig, prepared: &Prepared, train_y: &[Label], val_y: &[Label]) -> Result<EvalReport, String> {
    use crate::models::Classifier;
    let model = config.model.train(&prepared.train_x, train_y, config.seed).map_err(|e| e.to_string())?;
    let pred = model.predict_batch(&prepared.val_x).map_err(|e| e.to_string())?;
    evaluate(val_y, &pred).map_err(|e| e.to_string())
}

/// Trains every config on `train` and scores it on `val`, using at most
/// `parallelism` threads. Configs sharing a feature setup share one fitted
/// feature union. Failures are recorded per entry.
pub fn run_grid(
    train: &DatasetSplit,
    val: &DatasetSplit,
    configs: &[PipelineConfig],
    resources: &Resources,
    parallelism: usize,
) -> Result<GridResult, GridError> {
    let train_y = train.labels()?;
    let val_y = val.labels()?;
    let train_t = train.texts();
    let val_t = val.texts();

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut by_key: HashMap<String, usize> = HashMap::new();
    for (i, c) in configs.iter().enumerate() {
        let key = serde_json::to_string(&c.features).expect("features serialise");
        let g = *by_key.entry(key).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| GridError::ThreadPool(e.to_string()))?;
    let scored: Vec<(usize, Result<EvalReport, String>, f64)> = pool.install(|| {
        groups
            .par_iter()
            .flat_map(|members| {
                let start = Instant::now();
                let prepared = prepare(&configs[members[0]], resources, &train_t, &val_t);
                let prep_secs = start.elapsed().as_secs_f64();
                members
                    .par_iter()
                    .map(|&i| {
                        let start = Instant::now();
                        let outcome = match &prepared {
                            Ok(p) => score(&configs[i], p, &train_y, &val_y),
                            Err(e) => Err(e.clone()),
                        };
                        (i, outcome, prep_secs + start.elapsed().as_secs_f64())
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    });

    let mut slots: Vec<Option<GridEntry>> = vec![None; configs.len()];
    for (i, outcome, seconds) in scored {
        slots[i] = Some(GridEntry { config: configs[i].clone(), canonical: configs[i].canonical(), outcome, seconds });
    }
    let entries: Vec<GridEntry> = slots.into_iter().map(|e| e.expect("every config scored")).collect();
    let best = select_best(&entries);
    Ok(GridResult { entries, best })
}

/// [`enumerate_grid`] followed by [`run_grid`].
pub fn run_grid_spec(
    train: &DatasetSplit,
    val: &DatasetSplit,
    spec: &GridSpec,
    resources: &Resources,
    parallelism: usize,
) -> Result<GridResult, GridError> {
    let configs = enumerate_grid(spec)?;
    run_grid(train, val, &configs, resources, parallelism)
}

/// Retrains the winning config on `train`.
pub fn train_best(result: &GridResult, resources: &Resources, train: &DatasetSplit) -> Option<Result<TrainedPipeline, super::PipelineError>> {
    result.best_entry().map(|e| TrainedPipeline::train(&e.config, resources, train))
}

/// Hyperparameter grid for one model kind over `base`.
pub fn default_grid(kind: ModelKind, seed: u64, base: PipelineConfig) -> GridSpec {
    let spec = GridSpec::new(seed, base).axis("model", [kind.to_string().to_lowercase()]);
    match kind {
        ModelKind::Svm | ModelKind::Lr => spec.axis("lambda", [1e-5, 1e-4, 1e-3]).axis("epochs", [5i64, 20]),
        ModelKind::Nb => spec.axis("alpha", [0.1, 1.0]),
        ModelKind::Mlp => spec.axis("hidden", [64i64, 128]).axis("learning_rate", [0.01, 0.1]),
        ModelKind::Rf => spec
            .axis("n_trees", [100i64])
            .axis("max_depth", [Value::from("none"), Value::from(40i64)]),
    }
}
