use std::borrow::Cow;
use std::sync::LazyLock;

use regex::{Captures, Regex};

use super::PrepConfig;

static ENTITY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"&(?:#([0-9]{1,7})|#[xX]([0-9a-fA-F]{1,6})|(amp|lt|gt|quot|apos));").unwrap()
});

static LINK: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?:https?://|www\.)\S+").unwrap());

// Decoding shortens the string, so the fixpoint loop terminates well before this.
const MAX_DECODE_ROUNDS: usize = 16;

/// Replaces named (`&amp;`, `&lt;`, `&gt;`, `&quot;`, `&apos;`) and numeric
/// (`&#38;`, `&#x26;`) character references. Numeric references that do not
/// name a valid scalar value are left untouched.
pub fn decode_entities(text: &str) -> Cow<'_, str> {
    ENTITY.replace_all(text, |caps: &Captures<'_>| {
        let decoded = if let Some(dec) = caps.get(1) {
            dec.as_str().parse::<u32>().ok().and_then(char::from_u32)
        } else if let Some(hex) = caps.get(2) {
            u32::from_str_radix(hex.as_str(), 16).ok().and_then(char::from_u32)
        } else {
            match &caps[3] {
                "amp" => Some('&'),
                "lt" => Some('<'),
                "gt" => Some('>'),
                "quot" => Some('"'),
                _ => Some('\''),
            }
        };
        match decoded {
            Some(c) if c != '\0' => c.to_string(),
            _ => caps[0].to_string(),
        }
    })
}

/// Lowercases, decodes XML entities, optionally strips links and `@` replies,
/// and collapses whitespace runs into single spaces.
///
/// Entities are decoded until nothing changes, so doubly escaped input such
/// as `&amp;amp;` ends up as `&` and the function is idempotent.
pub fn normalize(text: &str, config: &PrepConfig) -> String {
    let mut current = text.to_lowercase();
    for _ in 0..MAX_DECODE_ROUNDS {
        match decode_entities(&current) {
            Cow::Borrowed(_) => break,
            Cow::Owned(decoded) => current = decoded.to_lowercase(),
        }
    }

    if config.remove_links {
        if let Cow::Owned(stripped) = LINK.replace_all(&current, " ") {
            current = stripped;
        }
    }

    let mut out = String::with_capacity(current.len());
    for word in current.split_whitespace() {
        if config.remove_replies && word.starts_with('@') {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprep::TokenizerKind;
    use proptest::prelude::*;

    fn cfg(links: bool, replies: bool) -> PrepConfig {
        let mut c = PrepConfig::minimal(TokenizerKind::Tweet);
        c.remove_links = links;
        c.remove_replies = replies;
        c
    }

    #[test]
    fn named_entities() {
        assert_eq!(normalize("Tom &amp; Jerry", &cfg(false, false)), "tom & jerry");
        assert_eq!(normalize("a &lt;b&gt; &quot;c&quot;", &cfg(false, false)), "a <b> \"c\"");
    }

    #[test]
    fn numeric_entities() {
        assert_eq!(normalize("caf&#233; &#x41;", &cfg(false, false)), "café a");
        // not a scalar value
        assert_eq!(normalize("&#xD800;", &cfg(false, false)), "&#xd800;");
    }

    #[test]
    fn double_escaped_entity_decodes_fully() {
        assert_eq!(normalize("&amp;amp;lt;", &cfg(false, false)), "<");
    }

    #[test]
    fn link_removal() {
        assert_eq!(normalize("Check https://t.co/x NOW", &cfg(true, false)), "check now");
        assert_eq!(normalize("see www.who.int/covid for more", &cfg(true, false)), "see for more");
        assert_eq!(
            normalize("Check https://t.co/x NOW", &cfg(false, false)),
            "check https://t.co/x now"
        );
    }

    #[test]
    fn reply_removal() {
        assert_eq!(normalize("@user masks WORK", &cfg(false, true)), "masks work");
        assert_eq!(normalize("email a@b.com", &cfg(false, true)), "email a@b.com");
    }

    #[test]
    fn whitespace_collapsed() {
        assert_eq!(normalize("  a \t\n b  ", &cfg(false, false)), "a b");
        assert_eq!(normalize("", &cfg(true, true)), "");
    }

    proptest! {
        #[test]
        fn idempotent(text in "(\\PC|&amp;|&#[0-9]{1,4};|&lt;|@[a-z]+|https://[a-z./]+| ){0,40}",
                      links: bool, replies: bool) {
            let c = cfg(links, replies);
            let once = normalize(&text, &c);
            prop_assert_eq!(normalize(&once, &c), once.clone());
        }

        #[test]
        fn output_has_no_uppercase_and_single_spaces(text in "\\PC{0,60}") {
            let out = normalize(&text, &cfg(true, true));
            prop_assert_eq!(out.to_lowercase(), out.clone());
            prop_assert!(!out.contains("  "));
            prop_assert_eq!(out.trim(), out.as_str());
        }
    }
}
