//! Word-category dictionaries in a `.dic` text format.
//!
//! Fields are tab-separated:
//!
//! ```text
//! %
//! 1    posemo
//! 2    affect
//! %
//! happy    1    2
//! hate*    2
//! ```
//!
//! A pattern ending in `*` matches any token with that prefix; other patterns
//! match exactly.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::FeatureError;
use crate::resources::DEFAULT_LEXICON;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("missing `%` header block")]
    MissingHeader,
    #[error("header block is not closed by `%`")]
    UnterminatedHeader,
    #[error("line {line}: malformed category line")]
    BadCategory { line: usize },
    #[error("line {line}: duplicate category id {id}")]
    DuplicateCategory { line: usize, id: u32 },
    #[error("line {line}: malformed entry")]
    BadEntry { line: usize },
    #[error("line {line}: unknown category id {id}")]
    UnknownCategoryId { line: usize, id: u32 },
    #[error("line {line}: `*` is only allowed as the last character")]
    MisplacedWildcard { line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub pattern: String,
    pub categories: Vec<u32>,
}

impl LexiconEntry {
    pub fn is_prefix(&self) -> bool {
        self.pattern.ends_with('*')
    }

    pub fn matches(&self, token: &str) -> bool {
        match self.pattern.strip_suffix('*') {
            Some(prefix) => token.starts_with(prefix),
            None => token == self.pattern,
        }
    }
}

/// Parsed dictionary. Serialises through its `.dic` text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LexiconDict {
    categories: Vec<(u32, String)>,
    entries: Vec<LexiconEntry>,
    literal: HashMap<String, Vec<u32>>,
    prefixes: Vec<(String, Vec<u32>)>,
}

impl LexiconDict {
    pub fn default_english() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        let mut found_header = false;
        for (_, line) in lines.by_ref() {
            if line.trim().is_empty() {
                continue;
            }
            if line.trim() == "%" {
                found_header = true;
                break;
            }
            return Err(LexiconError::MissingHeader);
        }
        if !found_header {
            return Err(LexiconError::MissingHeader);
        }

        let mut categories = Vec::new();
        let mut closed = false;
        for (no, line) in lines.by_ref() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "%" {
                closed = true;
                break;
            }
            let mut parts = line.split_whitespace();
            let (Some(id), Some(name), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(LexiconError::BadCategory { line: no });
            };
            let id: u32 = id.parse().map_err(|_| LexiconError::BadCategory { line: no })?;
            if categories.iter().any(|(c, _)| *c == id) {
                return Err(LexiconError::DuplicateCategory { line: no, id });
            }
            categories.push((id, name.to_string()));
        }
        if !closed {
            return Err(LexiconError::UnterminatedHeader);
        }

        let known: HashSet<u32> = categories.iter().map(|(id, _)| *id).collect();
        let mut entries = Vec::new();
        for (no, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split('\t').map(str::trim).filter(|p| !p.is_empty());
            let pattern = parts.next().ok_or(LexiconError::BadEntry { line: no })?.to_lowercase();
            if pattern.trim_end_matches('*').contains('*') || pattern == "*" || pattern.ends_with("**") {
                return Err(LexiconError::MisplacedWildcard { line: no });
            }
            let mut ids = Vec::new();
            for p in parts {
                let id: u32 = p.parse().map_err(|_| LexiconError::BadEntry { line: no })?;
                if !known.contains(&id) {
                    return Err(LexiconError::UnknownCategoryId { line: no, id });
                }
                if !ids.contains(&id) {
                    ids.push(id);
                }
            }
            if ids.is_empty() || pattern.chars().any(char::is_whitespace) {
                return Err(LexiconError::BadEntry { line: no });
            }
            entries.push(LexiconEntry { pattern, categories: ids });
        }
        Ok(Self::build(categories, entries))
    }

    fn build(categories: Vec<(u32, String)>, entries: Vec<LexiconEntry>) -> Self {
        let mut literal: HashMap<String, Vec<u32>> = HashMap::new();
        let mut prefixes = Vec::new();
        for e in &entries {
            match e.pattern.strip_suffix('*') {
                Some(prefix) => prefixes.push((prefix.to_string(), e.categories.clone())),
                None => literal.entry(e.pattern.clone()).or_default().extend(&e.categories),
            }
        }
        Self { categories, entries, literal, prefixes }
    }

    /// Categories in header order.
    pub fn categories(&self) -> &[(u32, String)] {
        &self.categories
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    /// Id of a category name; exact match first, then case-insensitive.
    pub fn category_id(&self, name: &str) -> Option<u32> {
        self.categories
            .iter()
            .find(|(_, n)| n == name)
            .or_else(|| self.categories.iter().find(|(_, n)| n.eq_ignore_ascii_case(name)))
            .map(|(id, _)| *id)
    }

    pub fn resolve<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<u32>, FeatureError> {
        names
            .iter()
            .map(|n| self.category_id(n.as_ref()).ok_or_else(|| FeatureError::UnknownCategory(n.as_ref().to_string())))
            .collect()
    }

    /// Every category any pattern assigns to `token`.
    pub fn categories_of(&self, token: &str) -> HashSet<u32> {
        let mut out: HashSet<u32> = self.literal.get(token).into_iter().flatten().copied().collect();
        for (prefix, ids) in &self.prefixes {
            if token.starts_with(prefix.as_str()) {
                out.extend(ids);
            }
        }
        out
    }

    /// `100 × matching tokens / max(1, tokens)` for each id in `ids`.
    pub fn percentages<S: AsRef<str>>(&self, tokens: &[S], ids: &[u32]) -> Vec<f64> {
        let mut counts = vec![0usize; ids.len()];
        for t in tokens {
            let cats = self.categories_of(&t.as_ref().to_lowercase());
            for (k, id) in ids.iter().enumerate() {
                if cats.contains(id) {
                    counts[k] += 1;
                }
            }
        }
        let denom = tokens.len().max(1) as f64;
        counts.into_iter().map(|c| 100.0 * c as f64 / denom).collect()
    }

    pub fn to_dic(&self) -> String {
        let mut out = String::from("%\n");
        for (id, name) in &self.categories {
            out.push_str(&format!("{id}\t{name}\n"));
        }
        out.push_str("%\n");
        for e in &self.entries {
            out.push_str(&e.pattern);
            for id in &e.categories {
                out.push_str(&format!("\t{id}"));
            }
            out.push('\n');
        }
        out
    }
}

impl TryFrom<String> for LexiconDict {
    type Error = LexiconError;

    fn try_from(text: String) -> Result<Self, Self::Error> {
        Self::parse(&text)
    }
}

impl From<LexiconDict> for String {
    fn from(d: LexiconDict) -> Self {
        d.to_dic()
    }
}

/// Percentage of tokens in each selected category, looked up by name.
pub fn lexicon_features<S: AsRef<str>, N: AsRef<str>>(
    tokens: &[S],
    dict: &LexiconDict,
    selected: &[N],
) -> Result<Vec<f64>, FeatureError> {
    let ids = dict.resolve(selected)?;
    Ok(dict.percentages(tokens, &ids))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SMALL: &str = "%\n1\tTone\n2\taffect\n%\nhappy\t1\nhate*\t2\nhappily\t1\t2\n";

    #[test]
    fn literal_match() {
        let d = LexiconDict::parse(SMALL).unwrap();
        assert_eq!(lexicon_features(&["happy", "sad"], &d, &["Tone"]).unwrap(), [50.0]);
    }

    #[test]
    fn prefix_match() {
        let d = LexiconDict::parse(SMALL).unwrap();
        assert_eq!(lexicon_features(&["hates"], &d, &["affect"]).unwrap(), [100.0]);
    }

    #[test]
    fn token_counts_toward_several_categories() {
        let d = LexiconDict::parse(SMALL).unwrap();
        assert_eq!(lexicon_features(&["happily"], &d, &["Tone", "affect"]).unwrap(), [100.0, 100.0]);
    }

    #[test]
    fn empty_tokens() {
        let d = LexiconDict::parse(SMALL).unwrap();
        let empty: [&str; 0] = [];
        assert_eq!(lexicon_features(&empty, &d, &["Tone", "affect"]).unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn unknown_category() {
        let d = LexiconDict::parse(SMALL).unwrap();
        assert!(matches!(
            lexicon_features(&["x"], &d, &["Clout"]),
            Err(FeatureError::UnknownCategory(n)) if n == "Clout"
        ));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(LexiconDict::parse("happy\t1\n"), Err(LexiconError::MissingHeader));
        assert_eq!(LexiconDict::parse("%\n1\tTone\n"), Err(LexiconError::UnterminatedHeader));
        assert_eq!(
            LexiconDict::parse("%\n1\tTone\n%\nha*ppy\t1\n"),
            Err(LexiconError::MisplacedWildcard { line: 4 })
        );
        assert_eq!(
            LexiconDict::parse("%\n1\tTone\n%\nhappy\t9\n"),
            Err(LexiconError::UnknownCategoryId { line: 4, id: 9 })
        );
        assert_eq!(
            LexiconDict::parse("%\n1\tTone\n1\tx\n%\n"),
            Err(LexiconError::DuplicateCategory { line: 3, id: 1 })
        );
    }

    #[test]
    fn bundled_lexicon_has_model_a_categories() {
        let d = LexiconDict::default_english();
        assert!(d.resolve(&["Tone", "affect", "social", "Authentic"]).is_ok());
        assert!(d.entries().len() > 900);
        assert!(d.entries().iter().all(|e| e.pattern == e.pattern.to_lowercase()));
    }

    #[test]
    fn dic_round_trip() {
        let d = LexiconDict::default_english();
        assert_eq!(LexiconDict::parse(&d.to_dic()).unwrap(), d);
    }

    proptest! {
        #[test]
        fn percentages_in_range(tokens in prop::collection::vec("[a-z]{1,8}", 0..30)) {
            let d = LexiconDict::default_english();
            let names: Vec<String> = d.categories().iter().map(|(_, n)| n.clone()).collect();
            for v in lexicon_features(&tokens, &d, &names).unwrap() {
                prop_assert!((0.0..=100.0).contains(&v));
            }
        }
    }
}
