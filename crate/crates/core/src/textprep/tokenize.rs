use std::sync::LazyLock;

use regex::Regex;

use super::{TokenList, TokenizerKind};

/// Emoticons recognised as single tokens by the tweet tokenizer.
pub const EMOTICONS: &[&str] = &[
    ":)", ":-)", ":(", ":-(", ":d", ":-d", ":D", ":-D", ";)", ";-)", ":p", ":-p", ":P", ":-P",
    ":o", ":-o", ":O", ":-O", ":/", ":-/", ":\\", ":-\\", ":|", ":-|", ":'(", ":'-(", ":')",
    ":*", ":-*", "<3", "</3", "xd", "xD", "XD", ":]", ":[", ":}", ":{", "=)", "=(", "=d", "=D",
    "=]", "=[", ";d", ";D", ";p", ";P", "8)", "8-)", "b)", "B)", "b-)", "B-)", ":3", ":>",
    ":<", ">:(", ">:)", "^_^", "^^", "-_-", "o_o", "o_O", "O_o", "t_t", "T_T", ":s", ":S",
    ":$", ":@", "(:", "):", "(;",
];

static WORD_PUNCT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\w+|[^\w\s]+").unwrap());

static URL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#"^(?:[hH][tT][tT][pP][sS]?://|[wW][wW][wW]\.)\S*[^\s.,;:!?)\]}'"]"#).unwrap()
});
static MENTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^@\w+").unwrap());
static HASHTAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^#\w+").unwrap());
static NUMBER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\d+(?:[.,:/]\d+)+").unwrap());
static WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\w+(?:['’-]\w+)*").unwrap());

static EMOTICONS_LONGEST_FIRST: LazyLock<Vec<&'static str>> = LazyLock::new(|| {
    let mut v = EMOTICONS.to_vec();
    v.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    v
});

/// Splits text into tokens with the chosen tokenizer.
pub fn tokenize(text: &str, kind: TokenizerKind) -> TokenList {
    match kind {
        TokenizerKind::WordPunct => WORD_PUNCT.find_iter(text).map(|m| m.as_str()).collect(),
        TokenizerKind::Tweet => tweet_tokens(text).collect(),
    }
}

fn emoticon_at(rest: &str) -> Option<usize> {
    EMOTICONS_LONGEST_FIRST.iter().find_map(|emo| {
        if !rest.starts_with(emo) {
            return None;
        }
        // `xd` must not swallow the start of `xdr`
        let ends_alnum = emo.chars().last().is_some_and(char::is_alphanumeric);
        let next_alnum = rest[emo.len()..].chars().next().is_some_and(char::is_alphanumeric);
        (!(ends_alnum && next_alnum)).then_some(emo.len())
    })
}

/// Rule priority: URL, mention, hashtag, emoticon, number with internal
/// separators, word (with internal apostrophes or hyphens), any other single
/// character.
fn tweet_tokens(text: &str) -> impl Iterator<Item = &str> {
    let mut pos = 0;
    std::iter::from_fn(move || {
        let skipped = text[pos..].len() - text[pos..].trim_start().len();
        pos += skipped;
        let rest = &text[pos..];
        let first = rest.chars().next()?;
        let len = URL
            .find(rest)
            .or_else(|| MENTION.find(rest))
            .or_else(|| HASHTAG.find(rest))
            .map(|m| m.end())
            .or_else(|| emoticon_at(rest))
            .or_else(|| NUMBER.find(rest).map(|m| m.end()))
            .or_else(|| WORD.find(rest).map(|m| m.end()))
            .unwrap_or(first.len_utf8());
        let token = &rest[..len];
        pos += len;
        Some(token)
    })
}
