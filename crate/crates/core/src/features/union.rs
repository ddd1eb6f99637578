use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lexicon::LexiconDict;
use super::punctuation::{punctuation_features, PunctCategory};
use super::readability::{readability_scores, ReadabilityIndex};
use super::scaler::DenseBlockScaler;
use super::tfidf::{NgramRange, TfidfModel};
use super::{FeatureError, SparseVector};
use crate::resources::Resources;
use crate::textprep::{normalize, preprocess, PrepConfig, TokenizerKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureFamily {
    Ngrams,
    Readability,
    Lexicon,
    Punctuation,
}

/// Which feature families to extract and how to preprocess text for each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureUnionConfig {
    pub use_ngrams: bool,
    pub ngram_range: NgramRange,
    pub min_df: usize,
    pub use_readability: Vec<ReadabilityIndex>,
    pub use_lexicon: Vec<String>,
    pub use_punctuation: Vec<PunctCategory>,
    pub prep_for_ngrams: PrepConfig,
    pub prep_for_dense: PrepConfig,
}

impl Default for FeatureUnionConfig {
    fn default() -> Self {
        Self::model_a()
    }
}

fn dedup<T: PartialEq + Clone>(items: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for it in items {
        if !out.contains(it) {
            out.push(it.clone());
        }
    }
    out
}

impl FeatureUnionConfig {
    /// Unigrams and bigrams over fully preprocessed text, plus Flesch Reading
    /// Ease, four lexicon categories and three punctuation rates computed on
    /// text with only links and replies removed.
    pub fn model_a() -> Self {
        let mut dense = PrepConfig::minimal(TokenizerKind::Tweet);
        dense.remove_links = true;
        dense.remove_replies = true;
        Self {
            use_ngrams: true,
            ngram_range: NgramRange::new(1, 2).unwrap(),
            min_df: 1,
            use_readability: vec![ReadabilityIndex::FleschReadingEase],
            use_lexicon: ["Tone", "affect", "social", "Authentic"].map(String::from).to_vec(),
            use_punctuation: vec![PunctCategory::AllPunc, PunctCategory::QMark, PunctCategory::Exclam],
            prep_for_ngrams: PrepConfig::full(TokenizerKind::Tweet),
            prep_for_dense: dense,
        }
    }

    /// Keeps only the listed families; the others are switched off.
    pub fn restrict(mut self, families: &[FeatureFamily]) -> Self {
        if !families.contains(&FeatureFamily::Ngrams) {
            self.use_ngrams = false;
        }
        if !families.contains(&FeatureFamily::Readability) {
            self.use_readability.clear();
        }
        if !families.contains(&FeatureFamily::Lexicon) {
            self.use_lexicon.clear();
        }
        if !families.contains(&FeatureFamily::Punctuation) {
            self.use_punctuation.clear();
        }
        self
    }

    pub fn families(&self) -> Vec<FeatureFamily> {
        let mut out = Vec::new();
        if self.use_ngrams {
            out.push(FeatureFamily::Ngrams);
        }
        if !self.use_readability.is_empty() {
            out.push(FeatureFamily::Readability);
        }
        if !self.use_lexicon.is_empty() {
            out.push(FeatureFamily::Lexicon);
        }
        if !self.use_punctuation.is_empty() {
            out.push(FeatureFamily::Punctuation);
        }
        out
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        if self.families().is_empty() {
            return Err(FeatureError::NoFamilyEnabled);
        }
        Ok(())
    }

    /// Number of dense features, after removing repeated selections.
    pub fn dense_width(&self) -> usize {
        dedup(&self.use_readability).len() + dedup(&self.use_lexicon).len() + dedup(&self.use_punctuation).len()
    }

    /// Dense feature names in column order.
    pub fn dense_feature_names(&self) -> Vec<String> {
        let mut names: Vec<String> = dedup(&self.use_readability).iter().map(|r| format!("readability:{r}")).collect();
        names.extend(dedup(&self.use_lexicon).iter().map(|c| format!("lexicon:{c}")));
        names.extend(dedup(&self.use_punctuation).iter().map(|p| format!("punct:{p}")));
        names
    }
}

/// Fitted state of the feature union. Built with [`FeatureUnion::new`], then
/// [`FeatureUnion::fit`] on training texts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureUnion {
    config: FeatureUnionConfig,
    resources: Resources,
    readability: Vec<ReadabilityIndex>,
    lexicon_ids: Vec<u32>,
    punctuation: Vec<PunctCategory>,
    tfidf: Option<TfidfModel>,
    scaler: Option<DenseBlockScaler>,
}

impl FeatureUnion {
    /// Checks the config against the resources. Lexicon category names must
    /// exist in `resources.lexicon`.
    pub fn new(config: FeatureUnionConfig, resources: Resources) -> Result<Self, FeatureError> {
        config.validate()?;
        let lexicon_ids = resources.lexicon.resolve(&dedup(&config.use_lexicon))?;
        Ok(Self {
            readability: dedup(&config.use_readability),
            punctuation: dedup(&config.use_punctuation),
            lexicon_ids,
            config,
            resources,
            tfidf: None,
            scaler: None,
        })
    }

    pub fn config(&self) -> &FeatureUnionConfig {
        &self.config
    }

    pub fn resources(&self) -> &Resources {
        &self.resources
    }

    pub fn tfidf(&self) -> Option<&TfidfModel> {
        self.tfidf.as_ref()
    }

    pub fn scaler(&self) -> Option<&DenseBlockScaler> {
        self.scaler.as_ref()
    }

    pub fn is_fitted(&self) -> bool {
        self.scaler.is_some()
    }

    fn dense_width(&self) -> usize {
        self.readability.len() + self.lexicon_ids.len() + self.punctuation.len()
    }

    /// Total output dimension; `NotFitted` before [`fit`](Self::fit).
    pub fn dim(&self) -> Result<usize, FeatureError> {
        if !self.is_fitted() {
            return Err(FeatureError::NotFitted);
        }
        Ok(self.tfidf.as_ref().map_or(0, TfidfModel::dim) + self.dense_width())
    }

    /// Swaps in another category lexicon. Fails with `DimensionMismatch` when
    /// the configured categories cannot all be found in it.
    pub fn replace_lexicon(&mut self, dict: LexiconDict) -> Result<(), FeatureError> {
        let names = dedup(&self.config.use_lexicon);
        let found: Vec<u32> = names.iter().filter_map(|n| dict.category_id(n)).collect();
        if found.len() != names.len() {
            return Err(FeatureError::DimensionMismatch { expected: names.len(), found: found.len() });
        }
        self.lexicon_ids = found;
        self.resources.lexicon = dict.into();
        Ok(())
    }

    fn ngram_tokens(&self, text: &str) -> Vec<String> {
        let r = &self.resources;
        preprocess(text, &self.config.prep_for_ngrams, &r.stopwords, &r.lemmas).into_inner()
    }

    /// Unscaled dense features of one post.
    pub fn raw_dense(&self, text: &str) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dense_width());
        let prep = &self.config.prep_for_dense;
        let normalized = normalize(text, prep);
        if !self.readability.is_empty() {
            match readability_scores(&normalized) {
                Ok(scores) => out.extend(self.readability.iter().map(|i| scores.get(*i))),
                Err(_) => out.extend(std::iter::repeat_n(0.0, self.readability.len())),
            }
        }
        if !self.lexicon_ids.is_empty() {
            let r = &self.resources;
            // lexicon rates count words only, so punctuation tokens are dropped
            let tokens: Vec<String> = preprocess(text, prep, &r.stopwords, &r.lemmas)
                .into_iter()
                .filter(|t| t.chars().any(char::is_alphanumeric))
                .collect();
            out.extend(r.lexicon.percentages(&tokens, &self.lexicon_ids));
        }
        if !self.punctuation.is_empty() {
            out.extend(punctuation_features(&normalized, &self.punctuation));
        }
        out
    }

    /// Fits the TF-IDF model and the dense scaler on training texts.
    pub fn fit<S: AsRef<str> + Sync>(&mut self, texts: &[S]) -> Result<(), FeatureError> {
        if texts.is_empty() {
            return Err(FeatureError::EmptyCorpus);
        }
        self.tfidf = if self.config.use_ngrams {
            let docs: Vec<Vec<String>> = texts.par_iter().map(|t| self.ngram_tokens(t.as_ref())).collect();
            Some(TfidfModel::fit_corpus(&docs, self.config.ngram_range, self.config.min_df)?)
        } else {
            None
        };
        let rows: Vec<Vec<f64>> = if self.dense_width() > 0 {
            texts.par_iter().map(|t| self.raw_dense(t.as_ref())).collect()
        } else {
            Vec::new()
        };
        let scaler = DenseBlockScaler::fit(&rows)?;
        self.scaler = Some(if rows.is_empty() {
            DenseBlockScaler::from_bounds(vec![0.0; self.dense_width()], vec![0.0; self.dense_width()])?
        } else {
            scaler
        });
        Ok(())
    }

    /// `[TF-IDF | scaled dense]` for one post.
    pub fn transform(&self, text: &str) -> Result<SparseVector, FeatureError> {
        let scaler = self.scaler.as_ref().ok_or(FeatureError::NotFitted)?;
        let sparse = match &self.tfidf {
            Some(m) => m.transform(&self.ngram_tokens(text)),
            None => SparseVector::zeros(0),
        };
        if self.dense_width() == 0 {
            return Ok(sparse);
        }
        let dense = scaler.transform(&self.raw_dense(text))?;
        Ok(sparse.concat(&SparseVector::from_dense(&dense)))
    }

    /// [`transform`](Self::transform) over many posts in parallel, order kept.
    pub fn transform_batch<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Result<Vec<SparseVector>, FeatureError> {
        texts.par_iter().map(|t| self.transform(t.as_ref())).collect()
    }

    pub fn fit_transform<S: AsRef<str> + Sync>(&mut self, texts: &[S]) -> Result<Vec<SparseVector>, FeatureError> {
        self.fit(texts)?;
        self.transform_batch(texts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: [&str; 3] = [
        "Wash your hands! Masks WORK. https://t.co/x",
        "@user Crocin cures covid?? Share before they delete it!!",
        "The ministry reported 1,000 new cases today &amp; 12 deaths.",
    ];

    #[test]
    fn ngrams_only_matches_tfidf() {
        let cfg = FeatureUnionConfig::model_a().restrict(&[FeatureFamily::Ngrams]);
        let mut u = FeatureUnion::new(cfg, Resources::default()).unwrap();
        let xs = u.fit_transform(&TOY).unwrap();
        let m = u.tfidf().unwrap();
        for (text, x) in TOY.iter().zip(&xs) {
            assert_eq!(x, &m.transform(&u.ngram_tokens(text)));
        }
    }

    #[test]
    fn model_a_dimension() {
        let mut u = FeatureUnion::new(FeatureUnionConfig::model_a(), Resources::default()).unwrap();
        let xs = u.fit_transform(&TOY).unwrap();
        let v = u.tfidf().unwrap().dim();
        assert_eq!(u.dim().unwrap(), v + 1 + 4 + 3);
        assert!(xs.iter().all(|x| x.dim() == v + 8));
        let other = u.transform("completely unseen text ?").unwrap();
        assert_eq!(other.dim(), v + 8);
        for x in &xs {
            assert!(x.iter().filter(|(i, _)| *i >= v).all(|(_, val)| (0.0..=1.0).contains(&val)));
        }
    }

    #[test]
    fn not_fitted() {
        let u = FeatureUnion::new(FeatureUnionConfig::model_a(), Resources::default()).unwrap();
        assert!(matches!(u.transform("x"), Err(FeatureError::NotFitted)));
        assert!(matches!(u.dim(), Err(FeatureError::NotFitted)));
    }

    #[test]
    fn constant_dense_feature_is_zero() {
        let cfg = FeatureUnionConfig::model_a().restrict(&[FeatureFamily::Punctuation]);
        let mut u = FeatureUnion::new(cfg, Resources::default()).unwrap();
        let xs = u.fit_transform(&["no marks", "none here"]).unwrap();
        assert!(xs.iter().all(|x| x.nnz() == 0));
        assert_eq!(u.transform("what?!").unwrap().nnz(), 0);
    }

    #[test]
    fn no_family_is_an_error() {
        let cfg = FeatureUnionConfig::model_a().restrict(&[]);
        assert!(matches!(FeatureUnion::new(cfg, Resources::default()), Err(FeatureError::NoFamilyEnabled)));
    }

    #[test]
    fn unknown_lexicon_category() {
        let mut cfg = FeatureUnionConfig::model_a();
        cfg.use_lexicon.push("Clout".into());
        assert!(matches!(
            FeatureUnion::new(cfg, Resources::default()),
            Err(FeatureError::UnknownCategory(c)) if c == "Clout"
        ));
    }

    #[test]
    fn replace_lexicon_checks_categories() {
        let mut u = FeatureUnion::new(FeatureUnionConfig::model_a(), Resources::default()).unwrap();
        let other = LexiconDict::parse("%\n1\tTone\n%\nhappy\t1\n").unwrap();
        assert!(matches!(u.replace_lexicon(other), Err(FeatureError::DimensionMismatch { .. })));
    }

    #[test]
    fn config_toml_round_trip() {
        let cfg = FeatureUnionConfig::model_a();
        let text = toml::to_string(&cfg).unwrap();
        let back: FeatureUnionConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(cfg.dense_feature_names().len(), 8);
    }
}
