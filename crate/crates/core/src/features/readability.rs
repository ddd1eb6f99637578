use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::FeatureError;

static SENTENCE_END: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[.!?]+(?:\s|$)").unwrap());

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReadabilityIndex {
    #[serde(rename = "FRE")]
    FleschReadingEase,
    #[serde(rename = "ARI")]
    Ari,
    #[serde(rename = "FK")]
    FleschKincaidGrade,
    #[serde(rename = "CL")]
    ColemanLiau,
}

impl ReadabilityIndex {
    pub const ALL: [ReadabilityIndex; 4] = [
        ReadabilityIndex::FleschReadingEase,
        ReadabilityIndex::Ari,
        ReadabilityIndex::FleschKincaidGrade,
        ReadabilityIndex::ColemanLiau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReadabilityIndex::FleschReadingEase => "FRE",
            ReadabilityIndex::Ari => "ARI",
            ReadabilityIndex::FleschKincaidGrade => "FK",
            ReadabilityIndex::ColemanLiau => "CL",
        }
    }
}

impl fmt::Display for ReadabilityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReadabilityIndex {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', ' '], "_").as_str() {
            "fre" | "flesch_reading_ease" => Ok(ReadabilityIndex::FleschReadingEase),
            "ari" | "automated_readability_index" => Ok(ReadabilityIndex::Ari),
            "fk" | "fkgl" | "flesch_kincaid_grade" => Ok(ReadabilityIndex::FleschKincaidGrade),
            "cl" | "cli" | "coleman_liau" => Ok(ReadabilityIndex::ColemanLiau),
            _ => Err(FeatureError::UnknownCategory(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityScores {
    pub flesch_reading_ease: f64,
    pub ari: f64,
    pub flesch_kincaid_grade: f64,
    pub coleman_liau: f64,
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    pub letters: usize,
}

impl ReadabilityScores {
    pub fn get(&self, index: ReadabilityIndex) -> f64 {
        match index {
            ReadabilityIndex::FleschReadingEase => self.flesch_reading_ease,
            ReadabilityIndex::Ari => self.ari,
            ReadabilityIndex::FleschKincaidGrade => self.flesch_kincaid_grade,
            ReadabilityIndex::ColemanLiau => self.coleman_liau,
        }
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel groups of the alphabetic characters of `word`, minus a silent final
/// `e`; at least 1.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    let mut count = 0;
    let mut prev_vowel = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !prev_vowel {
            count += 1;
        }
        prev_vowel = v;
    }
    let n = letters.len();
    if n >= 1 && letters[n - 1] == 'e' && count > 1 {
        let consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
        if !consonant_le {
            count -= 1;
        }
    }
    count.max(1)
}

/// Number of non-empty segments between runs of `.`, `!` or `?` followed by
/// whitespace or end of text; at least 1.
pub fn split_sentences(text: &str) -> usize {
    SENTENCE_END
        .split(text)
        .filter(|s| !s.trim().is_empty())
        .count()
        .max(1)
}

/// Whitespace-delimited tokens containing at least one alphanumeric character.
pub fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace().filter(|w| w.chars().any(char::is_alphanumeric))
}

pub fn readability_scores(text: &str) -> Result<ReadabilityScores, FeatureError> {
    let mut w = 0usize;
    let mut y = 0usize;
    let mut l = 0usize;
    for word in words(text) {
        w += 1;
        y += count_syllables(word);
        l += word.chars().filter(|c| c.is_alphabetic()).count();
    }
    if w == 0 {
        return Err(FeatureError::NoWords);
    }
    let s = split_sentences(text);
    let (wf, sf, yf, lf) = (w as f64, s as f64, y as f64, l as f64);
    Ok(ReadabilityScores {
        flesch_reading_ease: 206.835 - 1.015 * (wf / sf) - 84.6 * (yf / wf),
        ari: 4.71 * (lf / wf) + 0.5 * (wf / sf) - 21.43,
        flesch_kincaid_grade: 0.39 * (wf / sf) + 11.8 * (yf / wf) - 15.59,
        coleman_liau: 0.0588 * (100.0 * lf / wf) - 0.296 * (100.0 * sf / wf) - 15.8,
        words: w,
        sentences: s,
        syllables: y,
        letters: l,
    })
}
