#![allow(dead_code)]

use fakenews::corpus::{DatasetSplit, LabeledPost, SplitName};
use fakenews::Label;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHARED: &[&str] = &[
    "covid", "virus", "people", "cases", "today", "new", "the", "a", "in", "of", "and", "is", "to", "health", "india",
    "world", "vaccine", "says", "more", "than",
];
const REAL: &[&str] = &[
    "ministry", "reported", "confirmed", "testing", "official", "data", "hospital", "update", "states", "recovered",
    "according", "guidelines", "published", "study", "tested",
];
const FAKE: &[&str] = &[
    "cure", "miracle", "garlic", "hoax", "secret", "5g", "share", "truth", "exposed", "bill", "gates", "plandemic",
    "hidden", "shocking", "forward",
];
const TAILS: &[&str] = &["", ".", "!", "?", "!!!", ",", "...", " https://t.co/abc", " @user"];

/// One synthetic post. Class words make up roughly 60% of the content so the
/// task is learnable but not trivially separable.
pub fn post(rng: &mut ChaCha8Rng, label: Label) -> String {
    let own = if label == Label::Real { REAL } else { FAKE };
    let other = if label == Label::Real { FAKE } else { REAL };
    let n = rng.gen_range(4..18);
    let mut words: Vec<&str> = (0..n)
        .map(|_| {
            let r: f64 = rng.gen();
            if r < 0.35 {
                *own.choose(rng).unwrap()
            } else if r < 0.45 {
                *other.choose(rng).unwrap()
            } else {
                *SHARED.choose(rng).unwrap()
            }
        })
        .collect();
    if rng.gen_bool(0.3) {
        words.shuffle(rng);
    }
    let mut text = words.join(" ");
    if let Some(c) = text.get_mut(0..1) {
        c.make_ascii_uppercase();
    }
    text.push_str(TAILS.choose(rng).unwrap());
    text
}

/// Balanced labelled split of `n` posts.
pub fn split(name: SplitName, n: usize, seed: u64) -> DatasetSplit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let posts = (0..n)
        .map(|i| {
            let label = if i % 2 == 0 { Label::Real } else { Label::Fake };
            LabeledPost::new(format!("{name:?}-{i}"), post(&mut rng, label), Some(label))
        })
        .collect();
    DatasetSplit::new(name, posts)
}

/// `n` unlabelled posts.
pub fn texts(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let label = if rng.gen_bool(0.5) { Label::Real } else { Label::Fake };
            post(&mut rng, label)
        })
        .collect()
}
