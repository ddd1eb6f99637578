//! Feature families and their union into one sparse vector per post.
//!
//! - [`tfidf`]: word n-gram vocabulary and smoothed TF-IDF weighting
//! - [`readability`]: Flesch Reading Ease, ARI, Flesch-Kincaid grade, Coleman-Liau
//! - [`lexicon`]: percentage of words in dictionary categories
//! - [`punctuation`]: punctuation marks per 100 words
//! - [`union`]: `[TF-IDF | min-max scaled dense block]`

pub mod lexicon;
pub mod punctuation;
pub mod readability;
pub mod scaler;
mod sparse;
pub mod tfidf;
pub mod union;

pub use lexicon::{lexicon_features, LexiconDict, LexiconError};
pub use punctuation::{punctuation_features, PunctCategory};
pub use readability::{count_syllables, readability_scores, split_sentences, ReadabilityIndex, ReadabilityScores};
pub use scaler::DenseBlockScaler;
pub use sparse::SparseVector;
pub use tfidf::{fit_vocabulary, ngrams, NgramRange, TfidfModel, Vocabulary};
pub use union::{FeatureFamily, FeatureUnion, FeatureUnionConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeatureError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("vocabulary is empty after pruning")]
    EmptyVocabulary,
    #[error("invalid n-gram range ({lo}, {hi}); need 1 <= lo <= hi <= 3")]
    InvalidNgramRange { lo: usize, hi: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("text has no words")]
    NoWords,
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("feature union used before fit")]
    NotFitted,
    #[error("no feature family enabled")]
    NoFamilyEnabled,
    #[error("invalid vector: {0}")]
    InvalidVector(String),
}
