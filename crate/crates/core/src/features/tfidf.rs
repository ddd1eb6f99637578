use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{FeatureError, SparseVector};

/// Inclusive n-gram order range, `1 ≤ lo ≤ hi ≤ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct NgramRange {
    lo: usize,
    hi: usize,
}

impl NgramRange {
    pub const MAX_ORDER: usize = 3;

    pub fn new(lo: usize, hi: usize) -> Result<Self, FeatureError> {
        if lo == 0 || lo > hi || hi > Self::MAX_ORDER {
            return Err(FeatureError::InvalidNgramRange { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn unigrams() -> Self {
        Self { lo: 1, hi: 1 }
    }

    pub fn lo(self) -> usize {
        self.lo
    }

    pub fn hi(self) -> usize {
        self.hi
    }
}

impl TryFrom<(usize, usize)> for NgramRange {
    type Error = FeatureError;

    fn try_from((lo, hi): (usize, usize)) -> Result<Self, Self::Error> {
        Self::new(lo, hi)
    }
}

impl From<NgramRange> for (usize, usize) {
    fn from(r: NgramRange) -> Self {
        (r.lo, r.hi)
    }
}

/// Space-joined n-grams of every order in `range`, lower orders first.
pub fn ngrams<S: AsRef<str>>(tokens: &[S], range: NgramRange) -> Vec<String> {
    let mut out = Vec::new();
    for n in range.lo..=range.hi {
        for window in tokens.windows(n) {
            let mut gram = String::from(window[0].as_ref());
            for t in &window[1..] {
                gram.push(' ');
                gram.push_str(t.as_ref());
            }
            out.push(gram);
        }
    }
    out
}

/// Bijection between n-gram strings and dense column indices, assigned in
/// lexicographic term order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// From any set of terms; duplicates collapse.
    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = terms.into_iter().map(Into::into).collect();
        let terms: Vec<String> = set.into_iter().collect();
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self { terms, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    /// Terms in index order.
    pub fn terms(&self) -> &[String] {
        &self.terms
    }
}

impl TryFrom<Vec<String>> for Vocabulary {
    type Error = FeatureError;

    fn try_from(terms: Vec<String>) -> Result<Self, Self::Error> {
        if terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FeatureError::InvalidVector("vocabulary terms not strictly sorted".into()));
        }
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(Self { terms, index })
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(v: Vocabulary) -> Self {
        v.terms
    }
}

/// Keeps n-grams of orders `range` that occur in at least `min_df` documents.
pub fn fit_vocabulary<S: AsRef<str>>(
    corpus: &[Vec<S>],
    range: NgramRange,
    min_df: usize,
) -> Result<Vocabulary, FeatureError> {
    if corpus.is_empty() {
        return Err(FeatureError::EmptyCorpus);
    }
    let df = document_frequencies(corpus, range);
    let kept = df.into_iter().filter(|(_, c)| *c >= min_df.max(1)).map(|(t, _)| t);
    let vocab = Vocabulary::from_terms(kept);
    if vocab.is_empty() {
        return Err(FeatureError::EmptyVocabulary);
    }
    Ok(vocab)
}

fn document_frequencies<S: AsRef<str>>(corpus: &[Vec<S>], range: NgramRange) -> HashMap<String, usize> {
    let mut df: HashMap<String, usize> = HashMap::new();
    for doc in corpus {
        let unique: HashSet<String> = ngrams(doc, range).into_iter().collect();
        for gram in unique {
            *df.entry(gram).or_default() += 1;
        }
    }
    df
}

/// Vocabulary plus smoothed inverse document frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    vocabulary: Vocabulary,
    idf: Vec<f64>,
    ngram_range: NgramRange,
}

impl TfidfModel {
    /// `idf[j] = ln((1 + N) / (1 + df_j)) + 1`.
    pub fn fit<S: AsRef<str>>(corpus: &[Vec<S>], vocabulary: Vocabulary, range: NgramRange) -> Result<Self, FeatureError> {
        if corpus.is_empty() {
            return Err(FeatureError::EmptyCorpus);
        }
        let mut df = vec![0usize; vocabulary.len()];
        for doc in corpus {
            let unique: HashSet<String> = ngrams(doc, range).into_iter().collect();
            for gram in unique {
                if let Some(j) = vocabulary.index_of(&gram) {
                    df[j] += 1;
                }
            }
        }
        let n = corpus.len() as f64;
        let idf = df.iter().map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0).collect();
        Ok(Self { vocabulary, idf, ngram_range: range })
    }

    /// Fits vocabulary and idf in one pass over the same corpus.
    pub fn fit_corpus<S: AsRef<str>>(corpus: &[Vec<S>], range: NgramRange, min_df: usize) -> Result<Self, FeatureError> {
        let vocabulary = fit_vocabulary(corpus, range, min_df)?;
        Self::fit(corpus, vocabulary, range)
    }

    pub fn from_parts(vocabulary: Vocabulary, idf: Vec<f64>, ngram_range: NgramRange) -> Result<Self, FeatureError> {
        if idf.len() != vocabulary.len() {
            return Err(FeatureError::DimensionMismatch { expected: vocabulary.len(), found: idf.len() });
        }
        Ok(Self { vocabulary, idf, ngram_range })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn ngram_range(&self) -> NgramRange {
        self.ngram_range
    }

    pub fn dim(&self) -> usize {
        self.vocabulary.len()
    }

    /// Raw counts times idf, L2-normalised. Unknown n-grams are ignored.
    pub fn transform<S: AsRef<str>>(&self, tokens: &[S]) -> SparseVector {
        let mut counts: HashMap<usize, f64> = HashMap::new();
        for gram in ngrams(tokens, self.ngram_range) {
            if let Some(j) = self.vocabulary.index_of(&gram) {
                *counts.entry(j).or_default() += 1.0;
            }
        }
        let pairs: Vec<(usize, f64)> = counts.into_iter().map(|(j, c)| (j, c * self.idf[j])).collect();
        let mut v = SparseVector::from_pairs(self.dim(), pairs);
        let norm = v.norm();
        if norm > 0.0 {
            v.scale(1.0 / norm);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn docs() -> Vec<Vec<&'static str>> {
        vec![vec!["a", "b", "a"], vec!["b", "c"]]
    }

    #[test]
    fn unigram_vocabulary() {
        let v = fit_vocabulary(&docs(), NgramRange::unigrams(), 1).unwrap();
        assert_eq!(v.terms(), ["a", "b", "c"]);
        assert_eq!(v.index_of("c"), Some(2));
    }

    #[test]
    fn bigram_vocabulary() {
        let v = fit_vocabulary(&docs(), NgramRange::new(1, 2).unwrap(), 1).unwrap();
        assert_eq!(v.terms(), ["a", "a b", "b", "b a", "b c", "c"]);
    }

    #[test]
    fn min_df_prunes() {
        let v = fit_vocabulary(&docs(), NgramRange::unigrams(), 2).unwrap();
        assert_eq!(v.terms(), ["b"]);
        assert!(matches!(
            fit_vocabulary(&docs(), NgramRange::unigrams(), 3),
            Err(FeatureError::EmptyVocabulary)
        ));
    }

    #[test]
    fn ngram_range_bounds() {
        assert!(NgramRange::new(0, 1).is_err());
        assert!(NgramRange::new(2, 1).is_err());
        assert!(NgramRange::new(1, 4).is_err());
        assert!(NgramRange::new(3, 3).is_ok());
    }

    #[test]
    fn idf_and_transform_values() {
        let m = TfidfModel::fit_corpus(&docs(), NgramRange::unigrams(), 1).unwrap();
        assert_eq!(m.idf()[1], 1.0);
        assert!((m.idf()[0] - 1.405_465_108_108_164_4).abs() < 1e-12);
        let v = m.transform(&docs()[0]);
        assert!((v.get(0) - 0.94216).abs() < 5e-6);
        assert!((v.get(1) - 0.33518).abs() < 5e-6);
        assert_eq!(v.get(2), 0.0);
    }

    #[test]
    fn oov_is_zero_vector() {
        let m = TfidfModel::fit_corpus(&docs(), NgramRange::unigrams(), 1).unwrap();
        let v = m.transform(&["z"]);
        assert_eq!(v.nnz(), 0);
        assert_eq!(v.dim(), 3);
    }

    #[test]
    fn vocabulary_serde_round_trip() {
        let m = TfidfModel::fit_corpus(&docs(), NgramRange::new(1, 2).unwrap(), 1).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        let back: TfidfModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    fn corpus_strategy() -> impl Strategy<Value = Vec<Vec<String>>> {
        prop::collection::vec(prop::collection::vec("[a-e]", 0..8), 1..10)
    }

    proptest! {
        #[test]
        fn adding_a_document_bounds_idf(corpus in corpus_strategy(), extra in prop::collection::vec("[a-e]", 0..8)) {
            let range = NgramRange::unigrams();
            let Ok(before) = TfidfModel::fit_corpus(&corpus, range, 1) else { return Ok(()) };
            let mut bigger = corpus.clone();
            bigger.push(extra);
            let after = TfidfModel::fit_corpus(&bigger, range, 1).unwrap();
            let n = corpus.len() as f64;
            for (j, term) in before.vocabulary().terms().iter().enumerate() {
                let k = after.vocabulary().index_of(term).unwrap();
                prop_assert!(after.idf()[k] <= before.idf()[j] + ((n + 2.0) / (n + 1.0)).ln() + 1e-12);
                prop_assert!(after.idf()[k] >= 1.0);
            }
        }

        #[test]
        fn transform_norm_is_zero_or_one(corpus in corpus_strategy(), doc in prop::collection::vec("[a-g]", 0..10)) {
            let Ok(m) = TfidfModel::fit_corpus(&corpus, NgramRange::new(1, 2).unwrap(), 1) else { return Ok(()) };
            let norm = m.transform(&doc).norm();
            prop_assert!(norm.abs() < 1e-9 || (norm - 1.0).abs() < 1e-9);
        }
    }
}
