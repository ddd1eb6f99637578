use std::collections::{HashMap, HashSet};

use crate::resources::{DEFAULT_LEMMA_EXCEPTIONS, DEFAULT_LEMMA_WORDS};

/// Detachment rules tried in order after the exception table.
const DETACHMENT_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("es", ""),
    ("ies", "y"),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];

/// Dictionary used by [`lemmatize`]: irregular forms plus a set of known words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaLexicon {
    exceptions: HashMap<String, String>,
    valid_words: HashSet<String>,
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

impl LemmaLexicon {
    pub fn default_english() -> Self {
        Self::parse(DEFAULT_LEMMA_EXCEPTIONS, DEFAULT_LEMMA_WORDS)
    }

    /// `exceptions` holds `surface<TAB>lemma` lines, `words` one word per line.
    /// Lines without a tab in the exception file are ignored. Exception lemmas
    /// are added to the word set.
    pub fn parse(exceptions: &str, words: &str) -> Self {
        let mut valid_words: HashSet<String> = data_lines(words).map(str::to_lowercase).collect();
        let mut table = HashMap::new();
        for line in data_lines(exceptions) {
            if let Some((surface, lemma)) = line.split_once('\t') {
                let (surface, lemma) = (surface.trim().to_lowercase(), lemma.trim().to_lowercase());
                if surface.is_empty() || lemma.is_empty() {
                    continue;
                }
                valid_words.insert(lemma.clone());
                table.insert(surface, lemma);
            }
        }
        Self { exceptions: table, valid_words }
    }

    pub fn from_parts<E, W>(exceptions: E, words: W) -> Self
    where
        E: IntoIterator<Item = (String, String)>,
        W: IntoIterator<Item = String>,
    {
        let mut valid_words: HashSet<String> = words.into_iter().collect();
        let exceptions: HashMap<String, String> = exceptions.into_iter().collect();
        valid_words.extend(exceptions.values().cloned());
        Self { exceptions, valid_words }
    }

    pub fn is_word(&self, word: &str) -> bool {
        self.valid_words.contains(word)
    }

    pub fn exception(&self, word: &str) -> Option<&str> {
        self.exceptions.get(word).map(String::as_str)
    }

    pub fn word_count(&self) -> usize {
        self.valid_words.len()
    }

    /// Serialises back to the two-file text form (exceptions, words), sorted.
    pub fn to_text(&self) -> (String, String) {
        let mut exc: Vec<_> = self.exceptions.iter().collect();
        exc.sort();
        let mut words: Vec<_> = self.valid_words.iter().collect();
        words.sort();
        let exc = exc.iter().map(|(s, l)| format!("{s}\t{l}\n")).collect();
        let words = words.iter().map(|w| format!("{w}\n")).collect();
        (exc, words)
    }
}

/// Maps a lowercase word to its dictionary form.
///
/// Lookup order: exception table, the word itself if it is a known word, then
/// the first detachment-rule candidate that is a known word. Unknown words are
/// returned unchanged.
pub fn lemmatize(word: &str, lexicon: &LemmaLexicon) -> String {
    if let Some(lemma) = lexicon.exception(word) {
        return lemma.to_string();
    }
    if lexicon.is_word(word) {
        return word.to_string();
    }
    for (suffix, replacement) in DETACHMENT_RULES {
        if let Some(stem) = word.strip_suffix(suffix) {
            if stem.is_empty() {
                continue;
            }
            let candidate = format!("{stem}{replacement}");
            if lexicon.is_word(&candidate) {
                return candidate;
            }
        }
    }
    word.to_string()
}
