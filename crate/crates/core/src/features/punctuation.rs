use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::readability::words;
use super::FeatureError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PunctCategory {
    AllPunc,
    QMark,
    Exclam,
    Period,
    Comma,
    Dash,
    Colon,
    SemiC,
    Quote,
    Apostro,
    Parenth,
}

impl PunctCategory {
    pub const ALL: [PunctCategory; 11] = [
        PunctCategory::AllPunc,
        PunctCategory::QMark,
        PunctCategory::Exclam,
        PunctCategory::Period,
        PunctCategory::Comma,
        PunctCategory::Dash,
        PunctCategory::Colon,
        PunctCategory::SemiC,
        PunctCategory::Quote,
        PunctCategory::Apostro,
        PunctCategory::Parenth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PunctCategory::AllPunc => "AllPunc",
            PunctCategory::QMark => "QMark",
            PunctCategory::Exclam => "Exclam",
            PunctCategory::Period => "Period",
            PunctCategory::Comma => "Comma",
            PunctCategory::Dash => "Dash",
            PunctCategory::Colon => "Colon",
            PunctCategory::SemiC => "SemiC",
            PunctCategory::Quote => "Quote",
            PunctCategory::Apostro => "Apostro",
            PunctCategory::Parenth => "Parenth",
        }
    }

    /// Characters counted by this category. `AllPunc` counts the union.
    pub fn chars(self) -> &'static [char] {
        match self {
            PunctCategory::AllPunc => &[],
            PunctCategory::QMark => &['?'],
            PunctCategory::Exclam => &['!'],
            PunctCategory::Period => &['.'],
            PunctCategory::Comma => &[','],
            PunctCategory::Dash => &['-', '\u{2013}', '\u{2014}'],
            PunctCategory::Colon => &[':'],
            PunctCategory::SemiC => &[';'],
            PunctCategory::Quote => &['"', '\u{201c}', '\u{201d}'],
            PunctCategory::Apostro => &['\'', '\u{2018}', '\u{2019}'],
            PunctCategory::Parenth => &['(', ')'],
        }
    }

    pub fn matches(self, c: char) -> bool {
        match self {
            PunctCategory::AllPunc => Self::ALL[1..].iter().any(|p| p.chars().contains(&c)),
            _ => self.chars().contains(&c),
        }
    }
}

impl fmt::Display for PunctCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PunctCategory {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| FeatureError::UnknownCategory(s.to_string()))
    }
}

/// `100 × count / max(1, words)` per selected category.
pub fn punctuation_features(text: &str, selected: &[PunctCategory]) -> Vec<f64> {
    let denom = words(text).count().max(1) as f64;
    selected
        .iter()
        .map(|cat| 100.0 * text.chars().filter(|c| cat.matches(*c)).count() as f64 / denom)
        .collect()
}
