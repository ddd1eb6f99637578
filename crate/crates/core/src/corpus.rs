//! Dataset splits: loading, writing, class distribution and corpus statistics.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::textprep::{tokenize, TokenizerKind};

/// Gold class of a post. Ordering is `Fake < Real`; ties anywhere in the crate
/// break toward the smaller label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Fake,
    Real,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Fake, Label::Real];

    /// Row/column index in confusion matrices and per-class arrays.
    pub fn index(self) -> usize {
        match self {
            Label::Fake => 0,
            Label::Real => 1,
        }
    }

    /// Real = +1, Fake = −1.
    pub fn sign(self) -> f64 {
        match self {
            Label::Fake => -1.0,
            Label::Real => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Fake => "fake",
            Label::Real => "real",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown label `{0}`")]
pub struct ParseLabelError(pub String);

impl FromStr for Label {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("real") {
            Ok(Label::Real)
        } else if t.eq_ignore_ascii_case("fake") {
            Ok(Label::Fake)
        } else {
            Err(ParseLabelError(s.to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPost {
    pub id: String,
    pub text: String,
    pub label: Option<Label>,
}

impl LabeledPost {
    pub fn new(id: impl Into<String>, text: impl Into<String>, label: Option<Label>) -> Self {
        Self { id: id.into(), text: text.into(), label }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitName {
    Train,
    Validation,
    Test,
}

impl fmt::Display for SplitName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitName::Train => "train",
            SplitName::Validation => "validation",
            SplitName::Test => "test",
        })
    }
}

/// Posts of one split in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub name: SplitName,
    pub posts: Vec<LabeledPost>,
}

impl DatasetSplit {
    pub fn new(name: SplitName, posts: Vec<LabeledPost>) -> Self {
        Self { name, posts }
    }

    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }

    pub fn is_labeled(&self) -> bool {
        self.posts.iter().all(|p| p.label.is_some())
    }

    pub fn texts(&self) -> Vec<&str> {
        self.posts.iter().map(|p| p.text.as_str()).collect()
    }

    /// Gold labels, or `UnlabeledSplit` if any post lacks one.
    pub fn labels(&self) -> Result<Vec<Label>, CorpusError> {
        self.posts
            .iter()
            .map(|p| p.label.ok_or(CorpusError::UnlabeledSplit))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Tsv,
}

impl DataFormat {
    /// `.tsv` and `.tab` are tab-separated; everything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase) {
            Some(ext) if ext == "tsv" || ext == "tab" => DataFormat::Tsv,
            _ => DataFormat::Csv,
        }
    }

    fn delimiter(self) -> u8 {
        match self {
            DataFormat::Csv => b',',
            DataFormat::Tsv => b'\t',
        }
    }
}

impl FromStr for DataFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(DataFormat::Csv),
            "tsv" => Ok(DataFormat::Tsv),
            other => Err(format!("unknown data format `{other}`")),
        }
    }
}

/// Row numbers count data rows from 1 (the header is not counted).
#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("missing column `{column}` in header")]
    MissingColumn { column: &'static str },
    #[error("row {row}: duplicate id `{id}`")]
    DuplicateId { id: String, row: usize },
    #[error("row {row}: unknown label `{value}`")]
    UnknownLabel { value: String, row: usize },
    #[error("row {row}: missing label")]
    MissingLabel { row: usize },
    #[error("row {row}: empty text")]
    EmptyText { row: usize },
    #[error("split is not fully labeled")]
    UnlabeledSplit,
    #[error("malformed input: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

const TEXT_COLUMNS: [&str; 2] = ["tweet", "text"];

fn reader_builder(format: DataFormat) -> csv::ReaderBuilder {
    let mut b = csv::ReaderBuilder::new();
    b.delimiter(format.delimiter()).has_headers(true).flexible(true);
    b
}

fn find_column(headers: &csv::StringRecord, names: &[&str]) -> Option<usize> {
    headers
        .iter()
        .position(|h| names.iter().any(|n| h.trim().trim_start_matches('\u{feff}').eq_ignore_ascii_case(n)))
}

/// Reads a split from any reader. With `has_labels` the `label` column must be
/// present and filled in every row; without it labels are ignored.
pub fn read_split<R: Read>(
    reader: R,
    name: SplitName,
    format: DataFormat,
    has_labels: bool,
) -> Result<DatasetSplit, CorpusError> {
    let mut rdr = reader_builder(format).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let id_col = find_column(&headers, &["id"]).ok_or(CorpusError::MissingColumn { column: "id" })?;
    let text_col =
        find_column(&headers, &TEXT_COLUMNS).ok_or(CorpusError::MissingColumn { column: "tweet" })?;
    let label_col = if has_labels {
        Some(find_column(&headers, &["label"]).ok_or(CorpusError::MissingColumn { column: "label" })?)
    } else {
        None
    };

    let mut seen = HashSet::new();
    let mut posts = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record?;
        let id = record.get(id_col).unwrap_or("").trim().to_string();
        let text = record.get(text_col).unwrap_or("");
        if text.trim().is_empty() {
            return Err(CorpusError::EmptyText { row });
        }
        let label = match label_col {
            None => None,
            Some(c) => {
                let raw = record.get(c).unwrap_or("").trim();
                if raw.is_empty() {
                    return Err(CorpusError::MissingLabel { row });
                }
                Some(raw.parse::<Label>().map_err(|_| CorpusError::UnknownLabel {
                    value: raw.to_string(),
                    row,
                })?)
            }
        };
        if !seen.insert(id.clone()) {
            return Err(CorpusError::DuplicateId { id, row });
        }
        posts.push(LabeledPost { id, text: text.to_string(), label });
    }
    Ok(DatasetSplit { name, posts })
}

/// Loads a split from a CSV or TSV file with a header row.
pub fn load_dataset(
    path: &Path,
    name: SplitName,
    format: DataFormat,
    has_labels: bool,
) -> Result<DatasetSplit, CorpusError> {
    let file = std::fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_split(std::io::BufReader::new(file), name, format, has_labels)
}

/// Whether the file's header has a `label` column.
pub fn has_label_column(path: &Path, format: DataFormat) -> Result<bool, CorpusError> {
    let file = std::fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut rdr = reader_builder(format).from_reader(file);
    Ok(find_column(rdr.headers()?, &["label"]).is_some())
}

/// Writes `id,tweet[,label]` with a header. The label column is written when
/// every post has a label.
pub fn write_split<W: Write>(split: &DatasetSplit, writer: W, format: DataFormat) -> Result<(), CorpusError> {
    let mut w = csv::WriterBuilder::new().delimiter(format.delimiter()).from_writer(writer);
    let labeled = split.is_labeled() && !split.is_empty();
    if labeled {
        w.write_record(["id", "tweet", "label"])?;
    } else {
        w.write_record(["id", "tweet"])?;
    }
    for p in &split.posts {
        match p.label {
            Some(l) if labeled => w.write_record([p.id.as_str(), p.text.as_str(), l.as_str()])?,
            _ => w.write_record([p.id.as_str(), p.text.as_str()])?,
        }
    }
    w.flush().map_err(|source| CorpusError::Io { path: "<writer>".into(), source })?;
    Ok(())
}

/// Count and fraction of each label present in a labelled split.
pub fn class_distribution(posts: &[LabeledPost]) -> Result<BTreeMap<Label, (usize, f64)>, CorpusError> {
    let mut counts: BTreeMap<Label, usize> = BTreeMap::new();
    for p in posts {
        *counts.entry(p.label.ok_or(CorpusError::UnlabeledSplit)?).or_default() += 1;
    }
    let n = posts.len() as f64;
    Ok(counts.into_iter().map(|(l, c)| (l, (c, c as f64 / n))).collect())
}

/// How posts are split into words for statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tokenization {
    Whitespace,
    Tokenizer(TokenizerKind),
}

impl FromStr for Tokenization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("whitespace") {
            Ok(Tokenization::Whitespace)
        } else {
            s.parse().map(Tokenization::Tokenizer)
        }
    }
}

impl Tokenization {
    /// Lowercased word tokens of `text`.
    pub fn words(self, text: &str) -> Vec<String> {
        match self {
            Tokenization::Whitespace => text.split_whitespace().map(str::to_lowercase).collect(),
            Tokenization::Tokenizer(kind) => tokenize(text, kind)
                .into_iter()
                .map(|t| t.to_lowercase())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorpusStats {
    pub posts: usize,
    pub total_tokens: usize,
    pub unique_words: usize,
    pub avg_words_per_post: f64,
    pub avg_chars_per_post: f64,
    /// Size of the vocabulary shared with the other label; set in per-label stats.
    pub shared_vocab_with_other_class: Option<usize>,
    pub per_label_counts: BTreeMap<Label, usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabelStats {
    pub combined: CorpusStats,
    pub per_label: BTreeMap<Label, CorpusStats>,
    pub shared_vocab: usize,
}

fn stats_with_vocab(posts: &[&LabeledPost], tokenization: Tokenization) -> (CorpusStats, HashSet<String>) {
    let mut vocab = HashSet::new();
    let mut total_tokens = 0;
    let mut total_chars = 0;
    let mut per_label_counts = BTreeMap::new();
    for p in posts {
        let words = tokenization.words(&p.text);
        total_tokens += words.len();
        total_chars += p.text.trim().chars().count();
        vocab.extend(words);
        if let Some(l) = p.label {
            *per_label_counts.entry(l).or_default() += 1;
        }
    }
    let n = posts.len();
    let avg = |x: usize| if n == 0 { 0.0 } else { x as f64 / n as f64 };
    let stats = CorpusStats {
        posts: n,
        total_tokens,
        unique_words: vocab.len(),
        avg_words_per_post: avg(total_tokens),
        avg_chars_per_post: avg(total_chars),
        shared_vocab_with_other_class: None,
        per_label_counts,
    };
    (stats, vocab)
}

/// Vocabulary size, mean words and mean characters per post. Characters are
/// Unicode scalar values of the trimmed raw text; words are lowercased tokens.
pub fn corpus_stats(posts: &[LabeledPost], tokenization: Tokenization) -> CorpusStats {
    let refs: Vec<&LabeledPost> = posts.iter().collect();
    stats_with_vocab(&refs, tokenization).0
}

/// Combined statistics plus one block per label and the size of the
/// vocabulary the two labels share. Unlabelled posts count only toward the
/// combined block.
pub fn corpus_stats_by_label(posts: &[LabeledPost], tokenization: Tokenization) -> LabelStats {
    let all: Vec<&LabeledPost> = posts.iter().collect();
    let (combined, _) = stats_with_vocab(&all, tokenization);
    let mut per_label = BTreeMap::new();
    let mut vocabs = Vec::new();
    for label in Label::ALL {
        let subset: Vec<&LabeledPost> = posts.iter().filter(|p| p.label == Some(label)).collect();
        if subset.is_empty() {
            continue;
        }
        let (stats, vocab) = stats_with_vocab(&subset, tokenization);
        per_label.insert(label, stats);
        vocabs.push(vocab);
    }
    let shared_vocab = match vocabs.as_slice() {
        [a, b] => a.intersection(b).count(),
        _ => 0,
    };
    if vocabs.len() == 2 {
        for stats in per_label.values_mut() {
            stats.shared_vocab_with_other_class = Some(shared_vocab);
        }
    }
    LabelStats { combined, per_label, shared_vocab }
}
