use std::collections::HashSet;

use super::TokenList;
use crate::resources::DEFAULT_STOPWORDS;

/// Set of lowercase stopwords.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopWords {
    words: HashSet<String>,
}

impl StopWords {
    /// The bundled 179-word English list.
    pub fn english() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }

    /// One word per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Self { words }
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        if token.chars().any(char::is_uppercase) {
            self.words.contains(&token.to_lowercase())
        } else {
            self.words.contains(token)
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Words in sorted order.
    pub fn sorted(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.words.iter().map(String::as_str).collect();
        v.sort_unstable();
        v
    }
}

/// Drops tokens whose lowercase form is a stopword, keeping the order of the rest.
pub fn remove_stopwords(mut tokens: TokenList, stoplist: &StopWords) -> TokenList {
    tokens.retain(|t| !stoplist.contains(t));
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_list_has_179_words() {
        assert_eq!(StopWords::english().len(), 179);
    }

    #[test]
    fn removes_function_words() {
        let tokens: TokenList = ["the", "mask", "is", "safe"].into_iter().collect();
        let out = remove_stopwords(tokens, &StopWords::english());
        assert_eq!(out.into_inner(), ["mask", "safe"]);
    }

    #[test]
    fn empty_input() {
        let out = remove_stopwords(TokenList::default(), &StopWords::english());
        assert!(out.is_empty());
    }

    #[test]
    fn case_insensitive_match() {
        let stop = StopWords::from_words(["mask"]);
        let out = remove_stopwords(["Mask"].into_iter().collect(), &stop);
        assert!(out.is_empty());
    }

    #[test]
    fn parse_skips_comments() {
        let stop = StopWords::parse("# header\nthe\n\n  a  \n");
        assert_eq!(stop.sorted(), ["a", "the"]);
    }
}
