//! Shared linguistic resources: stopword list, lemma lexicon and category lexicon.
//!
//! Defaults are compiled into the crate from `data/`; each can be replaced by a
//! file in the same format.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::features::lexicon::{LexiconDict, LexiconError};
use crate::textprep::{LemmaLexicon, StopWords};

pub(crate) const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");
pub(crate) const DEFAULT_LEMMA_EXCEPTIONS: &str = include_str!("../data/lemma_exceptions.tsv");
pub(crate) const DEFAULT_LEMMA_WORDS: &str = include_str!("../data/lemma_words.txt");
pub(crate) const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.dic");

#[derive(Debug, thiserror::Error)]
pub enum ResourceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid lexicon {path}: {source}")]
    Lexicon {
        path: String,
        #[source]
        source: LexiconError,
    },
}

/// Immutable bundle of the resources a pipeline needs. Cheap to clone.
/// Serialises as the text form of each resource.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ResourcesData", into = "ResourcesData")]
pub struct Resources {
    pub stopwords: Arc<StopWords>,
    pub lemmas: Arc<LemmaLexicon>,
    pub lexicon: Arc<LexiconDict>,
}

impl Default for Resources {
    fn default() -> Self {
        Self {
            stopwords: Arc::new(StopWords::english()),
            lemmas: Arc::new(LemmaLexicon::default_english()),
            lexicon: Arc::new(LexiconDict::default_english()),
        }
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, ResourceError> {
    std::fs::read_to_string(path).map_err(|source| ResourceError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl Resources {
    pub fn with_stopwords_file(mut self, path: &Path) -> Result<Self, ResourceError> {
        self.stopwords = Arc::new(StopWords::parse(&read_text(path)?));
        Ok(self)
    }

    /// Replaces the lemma lexicon. Either file may be omitted, in which case the
    /// built-in part is kept.
    pub fn with_lemma_files(
        mut self,
        exceptions: Option<&Path>,
        words: Option<&Path>,
    ) -> Result<Self, ResourceError> {
        if exceptions.is_none() && words.is_none() {
            return Ok(self);
        }
        let exc = match exceptions {
            Some(p) => read_text(p)?,
            None => DEFAULT_LEMMA_EXCEPTIONS.to_string(),
        };
        let words = match words {
            Some(p) => read_text(p)?,
            None => DEFAULT_LEMMA_WORDS.to_string(),
        };
        self.lemmas = Arc::new(LemmaLexicon::parse(&exc, &words));
        Ok(self)
    }

    pub fn with_lexicon_file(mut self, path: &Path) -> Result<Self, ResourceError> {
        let text = read_text(path)?;
        let dict = LexiconDict::parse(&text).map_err(|source| ResourceError::Lexicon {
            path: path.display().to_string(),
            source,
        })?;
        self.lexicon = Arc::new(dict);
        Ok(self)
    }
}

#[derive(Serialize, Deserialize)]
struct ResourcesData {
    stopwords: Vec<String>,
    lemma_exceptions: String,
    lemma_words: String,
    lexicon: String,
}

impl From<Resources> for ResourcesData {
    fn from(r: Resources) -> Self {
        let (lemma_exceptions, lemma_words) = r.lemmas.to_text();
        Self {
            stopwords: r.stopwords.sorted().into_iter().map(String::from).collect(),
            lemma_exceptions,
            lemma_words,
            lexicon: r.lexicon.to_dic(),
        }
    }
}

impl TryFrom<ResourcesData> for Resources {
    type Error = LexiconError;

    fn try_from(d: ResourcesData) -> Result<Self, Self::Error> {
        Ok(Self {
            stopwords: Arc::new(StopWords::from_words(d.stopwords)),
            lemmas: Arc::new(LemmaLexicon::parse(&d.lemma_exceptions, &d.lemma_words)),
            lexicon: Arc::new(LexiconDict::parse(&d.lexicon)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_round_trip() {
        let r = Resources::default();
        let json = serde_json::to_string(&r).unwrap();
        let back: Resources = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn missing_file() {
        let err = Resources::default().with_stopwords_file(Path::new("/nonexistent/stop.txt"));
        assert!(matches!(err, Err(ResourceError::Io { .. })));
    }
}
