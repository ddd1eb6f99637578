//! Porter2 (Snowball English) stemmer.
//!
//! Operates on lowercase ASCII words, optionally containing apostrophes. The
//! letter `Y` is used internally to mark a `y` that behaves as a consonant.

const EXCEPTIONS: &[(&str, &str)] = &[
    ("andes", "andes"),
    ("atlas", "atlas"),
    ("bias", "bias"),
    ("cosmos", "cosmos"),
    ("early", "earli"),
    ("gently", "gentl"),
    ("howe", "howe"),
    ("idly", "idl"),
    ("news", "news"),
    ("only", "onli"),
    ("singly", "singl"),
    ("skies", "sky"),
    ("skis", "ski"),
    ("sky", "sky"),
    ("ugly", "ugli"),
];

const REGION_PREFIXES: &[&str] = &[
    "arsen", "commun", "emerg", "gener", "inter", "later", "organ", "past", "univers",
];

enum Step2 {
    Replace(&'static str),
    OgiAfterL,
    LiAfterValidEnding,
}

const STEP2: &[(&str, Step2)] = &[
    ("tional", Step2::Replace("tion")),
    ("enci", Step2::Replace("ence")),
    ("anci", Step2::Replace("ance")),
    ("abli", Step2::Replace("able")),
    ("entli", Step2::Replace("ent")),
    ("izer", Step2::Replace("ize")),
    ("ization", Step2::Replace("ize")),
    ("ational", Step2::Replace("ate")),
    ("ation", Step2::Replace("ate")),
    ("ator", Step2::Replace("ate")),
    ("alism", Step2::Replace("al")),
    ("aliti", Step2::Replace("al")),
    ("alli", Step2::Replace("al")),
    ("fulness", Step2::Replace("ful")),
    ("fulli", Step2::Replace("ful")),
    ("ousli", Step2::Replace("ous")),
    ("ousness", Step2::Replace("ous")),
    ("iveness", Step2::Replace("ive")),
    ("iviti", Step2::Replace("ive")),
    ("biliti", Step2::Replace("ble")),
    ("bli", Step2::Replace("ble")),
    ("ogist", Step2::Replace("og")),
    ("lessli", Step2::Replace("less")),
    ("ogi", Step2::OgiAfterL),
    ("li", Step2::LiAfterValidEnding),
];

enum Step3 {
    Replace(&'static str),
    Delete,
    DeleteInR2,
}

const STEP3: &[(&str, Step3)] = &[
    ("tional", Step3::Replace("tion")),
    ("ational", Step3::Replace("ate")),
    ("alize", Step3::Replace("al")),
    ("icate", Step3::Replace("ic")),
    ("iciti", Step3::Replace("ic")),
    ("ical", Step3::Replace("ic")),
    ("ful", Step3::Delete),
    ("ness", Step3::Delete),
    ("ative", Step3::DeleteInR2),
];

const STEP4: &[&str] = &[
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ism", "ate",
    "iti", "ous", "ive", "ize", "ion",
];

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

fn is_vowel_wxy(c: u8) -> bool {
    is_vowel(c) || matches!(c, b'w' | b'x' | b'Y')
}

fn is_valid_li(c: u8) -> bool {
    matches!(c, b'c' | b'd' | b'e' | b'g' | b'h' | b'k' | b'm' | b'n' | b'r' | b't')
}

/// Longest entry of `table` that `word` ends with.
fn longest_suffix<'t, T>(word: &[u8], table: &'t [(&'static str, T)]) -> Option<&'t (&'static str, T)> {
    table
        .iter()
        .filter(|(suffix, _)| word.ends_with(suffix.as_bytes()))
        .max_by_key(|(suffix, _)| suffix.len())
}

struct Word {
    b: Vec<u8>,
    p1: usize,
    p2: usize,
}

impl Word {
    fn new(word: &str) -> Self {
        let mut b = word.as_bytes().to_vec();
        if b.first() == Some(&b'\'') {
            b.remove(0);
        }
        if b.first() == Some(&b'y') {
            b[0] = b'Y';
        }
        for i in 1..b.len() {
            if b[i] == b'y' && is_vowel(b[i - 1]) {
                b[i] = b'Y';
            }
        }
        let mut w = Word { b, p1: 0, p2: 0 };
        w.mark_regions();
        w
    }

    /// Position after the first non-vowel following a vowel, searching from `from`.
    fn region_start(&self, from: usize) -> usize {
        let n = self.b.len();
        let Some(v) = (from..n).find(|&i| is_vowel(self.b[i])) else {
            return n;
        };
        match (v + 1..n).find(|&i| !is_vowel(self.b[i])) {
            Some(c) => c + 1,
            None => n,
        }
    }

    fn mark_regions(&mut self) {
        let prefix = REGION_PREFIXES
            .iter()
            .filter(|p| self.b.starts_with(p.as_bytes()))
            .map(|p| p.len())
            .max();
        self.p1 = prefix.unwrap_or_else(|| self.region_start(0));
        self.p2 = if self.p1 >= self.b.len() {
            self.b.len()
        } else {
            self.region_start(self.p1)
        };
    }

    fn len(&self) -> usize {
        self.b.len()
    }

    fn ends_with(&self, s: &str) -> bool {
        self.b.ends_with(s.as_bytes())
    }

    fn replace_suffix(&mut self, remove: usize, with: &str) {
        let n = self.b.len() - remove;
        self.b.truncate(n);
        self.b.extend_from_slice(with.as_bytes());
    }

    /// Whether `b[..end]` ends in a short syllable.
    fn short_syllable(&self, end: usize) -> bool {
        let b = &self.b[..end];
        if end >= 3 && !is_vowel_wxy(b[end - 1]) && is_vowel(b[end - 2]) && !is_vowel(b[end - 3]) {
            return true;
        }
        if end == 2 && !is_vowel(b[1]) && is_vowel(b[0]) {
            return true;
        }
        b.ends_with(b"past")
    }

    fn step_1a(&mut self) {
        for suffix in ["'s'", "'s", "'"] {
            if self.ends_with(suffix) {
                self.replace_suffix(suffix.len(), "");
                break;
            }
        }

        if self.ends_with("sses") {
            self.replace_suffix(4, "ss");
        } else if self.ends_with("ied") || self.ends_with("ies") {
            let start = self.len() - 3;
            self.replace_suffix(3, if start >= 2 { "i" } else { "ie" });
        } else if self.ends_with("ss") || self.ends_with("us") {
        } else if self.ends_with("s") {
            let start = self.len() - 1;
            // a vowel somewhere before the letter preceding the `s`
            if start >= 1 && self.b[..start - 1].iter().any(|&c| is_vowel(c)) {
                self.b.truncate(start);
            }
        }
    }

    fn step_1b(&mut self) {
        const EED: u8 = 1;
        const DELETE: u8 = 2;
        const ING: u8 = 3;
        let found = [
            ("eedly", EED),
            ("ingly", DELETE),
            ("edly", DELETE),
            ("eed", EED),
            ("ing", ING),
            ("ed", DELETE),
        ]
        .into_iter()
        .find(|(s, _)| self.ends_with(s));
        let Some((suffix, kind)) = found else {
            return;
        };
        let start = self.len() - suffix.len();

        match kind {
            EED => {
                if start >= self.p1 && !matches!(&self.b[..start], b"succ" | b"proc" | b"exc") {
                    self.replace_suffix(suffix.len(), "ee");
                }
                return;
            }
            ING => {
                let prefix = &self.b[..start];
                if prefix.ends_with(b"y") {
                    if start == 2 && !is_vowel(prefix[0]) {
                        // dying -> die, lying -> lie
                        self.replace_suffix(4, "ie");
                        return;
                    }
                } else if matches!(prefix, b"even" | b"cann" | b"inn" | b"earr" | b"herr" | b"out") {
                    return;
                }
            }
            _ => {}
        }

        if !self.b[..start].iter().any(|&c| is_vowel(c)) {
            return;
        }
        self.b.truncate(start);

        if self.ends_with("at") || self.ends_with("bl") || self.ends_with("iz") {
            self.b.push(b'e');
            return;
        }
        const DOUBLES: [&str; 9] = ["bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt"];
        if DOUBLES.iter().any(|d| self.ends_with(d)) {
            if !(self.len() == 3 && matches!(self.b[0], b'a' | b'e' | b'o')) {
                self.b.pop();
            }
            return;
        }
        if self.len() == self.p1 && self.short_syllable(self.len()) {
            self.b.push(b'e');
        }
    }

    fn step_1c(&mut self) {
        let n = self.len();
        if n >= 3 && matches!(self.b[n - 1], b'y' | b'Y') && !is_vowel(self.b[n - 2]) {
            self.b[n - 1] = b'i';
        }
    }

    fn step_2(&mut self) {
        let Some((suffix, action)) = longest_suffix(&self.b, STEP2) else {
            return;
        };
        let start = self.len() - suffix.len();
        if start < self.p1 {
            return;
        }
        match action {
            Step2::Replace(with) => self.replace_suffix(suffix.len(), with),
            Step2::OgiAfterL => {
                if start >= 1 && self.b[start - 1] == b'l' {
                    self.replace_suffix(suffix.len(), "og");
                }
            }
            Step2::LiAfterValidEnding => {
                if start >= 1 && is_valid_li(self.b[start - 1]) {
                    self.replace_suffix(suffix.len(), "");
                }
            }
        }
    }

    fn step_3(&mut self) {
        let Some((suffix, action)) = longest_suffix(&self.b, STEP3) else {
            return;
        };
        let start = self.len() - suffix.len();
        if start < self.p1 {
            return;
        }
        match action {
            Step3::Replace(with) => self.replace_suffix(suffix.len(), with),
            Step3::Delete => self.replace_suffix(suffix.len(), ""),
            Step3::DeleteInR2 => {
                if start >= self.p2 {
                    self.replace_suffix(suffix.len(), "");
                }
            }
        }
    }

    fn step_4(&mut self) {
        let Some(suffix) = STEP4
            .iter()
            .filter(|s| self.ends_with(s))
            .max_by_key(|s| s.len())
        else {
            return;
        };
        let start = self.len() - suffix.len();
        if start < self.p2 {
            return;
        }
        if *suffix == "ion" {
            if start >= 1 && matches!(self.b[start - 1], b's' | b't') {
                self.replace_suffix(3, "");
            }
        } else {
            self.replace_suffix(suffix.len(), "");
        }
    }

    fn step_5(&mut self) {
        let n = self.len();
        if n == 0 {
            return;
        }
        let start = n - 1;
        match self.b[start] {
            b'e' => {
                if start >= self.p2 || (start >= self.p1 && !self.short_syllable(start)) {
                    self.b.truncate(start);
                }
            }
            b'l' if start >= self.p2 && start >= 1 && self.b[start - 1] == b'l' => self.b.truncate(start),
            _ => {}
        }
    }

    fn finish(mut self) -> String {
        for c in &mut self.b {
            if *c == b'Y' {
                *c = b'y';
            }
        }
        String::from_utf8(self.b).expect("stemmer only handles ASCII")
    }
}

/// Porter2 stem of a lowercase word. Words containing anything other than
/// ASCII lowercase letters and apostrophes are returned unchanged, as are
/// words shorter than three characters.
pub fn stem(word: &str) -> String {
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_lowercase() || b == b'\'') {
        return word.to_string();
    }
    if let Some((_, out)) = EXCEPTIONS.iter().find(|(w, _)| *w == word) {
        return out.to_string();
    }
    if word.len() < 3 {
        return word.to_string();
    }
    let mut w = Word::new(word);
    w.step_1a();
    w.step_1b();
    w.step_1c();
    w.step_2();
    w.step_3();
    w.step_4();
    w.step_5();
    w.finish()
}
