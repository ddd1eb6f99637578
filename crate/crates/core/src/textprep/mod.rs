//! Preprocessing stages applied to raw post text before feature extraction.
//!
//! The pipeline order is fixed: [`normalize`] → [`tokenize`] → stopword
//! removal → stemming or lemmatisation. Lowercasing and XML entity decoding
//! always run; the remaining steps are switched by [`PrepConfig`].

mod lemma;
mod normalize;
mod stem;
mod stopwords;
mod tokenize;

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

pub use lemma::{lemmatize, LemmaLexicon};
pub use normalize::{decode_entities, normalize};
pub use stem::stem;
pub use stopwords::{remove_stopwords, StopWords};
pub use tokenize::{tokenize, EMOTICONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenizerKind {
    /// Social-media aware: keeps URLs, @mentions, #hashtags, emoticons and
    /// contractions together.
    Tweet,
    /// Alternating runs of word characters and punctuation.
    WordPunct,
}

impl fmt::Display for TokenizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TokenizerKind::Tweet => "tweet",
            TokenizerKind::WordPunct => "word_punct",
        })
    }
}

impl std::str::FromStr for TokenizerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "tweet" => Ok(TokenizerKind::Tweet),
            "word_punct" | "wordpunct" => Ok(TokenizerKind::WordPunct),
            other => Err(format!("unknown tokenizer `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StemOrLemma {
    #[default]
    None,
    Stem,
    Lemmatize,
}

impl std::str::FromStr for StemOrLemma {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "off" => Ok(StemOrLemma::None),
            "stem" => Ok(StemOrLemma::Stem),
            "lemmatize" | "lemma" => Ok(StemOrLemma::Lemmatize),
            other => Err(format!("unknown stem_or_lemma `{other}`")),
        }
    }
}

/// Optional preprocessing steps. Lowercasing and entity decoding are not
/// listed because they cannot be switched off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrepConfig {
    pub remove_stopwords: bool,
    pub remove_links: bool,
    pub remove_replies: bool,
    pub stem_or_lemma: StemOrLemma,
    pub tokenizer: TokenizerKind,
}

impl Default for PrepConfig {
    fn default() -> Self {
        Self::minimal(TokenizerKind::Tweet)
    }
}

impl PrepConfig {
    /// Only the mandatory stages.
    pub fn minimal(tokenizer: TokenizerKind) -> Self {
        Self {
            remove_stopwords: false,
            remove_links: false,
            remove_replies: false,
            stem_or_lemma: StemOrLemma::None,
            tokenizer,
        }
    }

    /// Every optional step on, with lemmatisation.
    pub fn full(tokenizer: TokenizerKind) -> Self {
        Self {
            remove_stopwords: true,
            remove_links: true,
            remove_replies: true,
            stem_or_lemma: StemOrLemma::Lemmatize,
            tokenizer,
        }
    }
}

/// Ordered tokens of one post. Tokens are never empty and never contain
/// whitespace when produced by [`tokenize`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenList(Vec<String>);

impl TokenList {
    pub fn new(tokens: Vec<String>) -> Self {
        Self(tokens)
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    pub fn retain<F: FnMut(&String) -> bool>(&mut self, f: F) {
        self.0.retain(f)
    }

    pub fn map_in_place<F: FnMut(&str) -> String>(&mut self, mut f: F) {
        for t in &mut self.0 {
            *t = f(t);
        }
    }
}

impl Deref for TokenList {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl<S: Into<String>> FromIterator<S> for TokenList {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self(iter.into_iter().map(Into::into).collect())
    }
}

impl IntoIterator for TokenList {
    type Item = String;
    type IntoIter = std::vec::IntoIter<String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a TokenList {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Runs the full preprocessing pipeline on one post.
pub fn preprocess(
    text: &str,
    config: &PrepConfig,
    stoplist: &StopWords,
    lexicon: &LemmaLexicon,
) -> TokenList {
    let normalized = normalize(text, config);
    let mut tokens = tokenize(&normalized, config.tokenizer);
    if config.remove_stopwords {
        tokens = remove_stopwords(tokens, stoplist);
    }
    match config.stem_or_lemma {
        StemOrLemma::None => {}
        StemOrLemma::Stem => tokens.map_in_place(stem),
        StemOrLemma::Lemmatize => tokens.map_in_place(|t| lemmatize(t, lexicon)),
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn full_pipeline_example() {
        let config = PrepConfig::full(TokenizerKind::Tweet);
        let out = preprocess(
            "The vaccines ARE working! &amp; safe",
            &config,
            &StopWords::english(),
            &LemmaLexicon::default_english(),
        );
        assert_eq!(out.into_inner(), toks(&["vaccine", "working", "!", "&", "safe"]));
    }

    #[test]
    fn mandatory_stages_only() {
        let config = PrepConfig::minimal(TokenizerKind::WordPunct);
        let out = preprocess(
            "Hello",
            &config,
            &StopWords::english(),
            &LemmaLexicon::default_english(),
        );
        assert_eq!(out.into_inner(), toks(&["hello"]));
    }

    #[test]
    fn links_and_replies_removed_entirely() {
        let mut config = PrepConfig::minimal(TokenizerKind::Tweet);
        config.remove_links = true;
        config.remove_replies = true;
        let out = preprocess(
            "@bot http://x.y",
            &config,
            &StopWords::english(),
            &LemmaLexicon::default_english(),
        );
        assert!(out.is_empty());
    }

    #[test]
    fn stemming_stage() {
        let mut config = PrepConfig::minimal(TokenizerKind::WordPunct);
        config.stem_or_lemma = StemOrLemma::Stem;
        let out = preprocess(
            "Running generously",
            &config,
            &StopWords::english(),
            &LemmaLexicon::default_english(),
        );
        assert_eq!(out.into_inner(), toks(&["run", "generous"]));
    }

    #[test]
    fn tokenizer_names_parse() {
        assert_eq!("tweet".parse::<TokenizerKind>().unwrap(), TokenizerKind::Tweet);
        assert_eq!("word-punct".parse::<TokenizerKind>().unwrap(), TokenizerKind::WordPunct);
        assert!("nltk".parse::<TokenizerKind>().is_err());
    }
}
