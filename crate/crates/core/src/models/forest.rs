use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_training, Classifier, ModelError};
use crate::corpus::Label;
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// `None` grows until leaves are pure.
    pub max_depth: Option<usize>,
    /// Features examined per split; `None` means `⌈√d⌉`.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl ForestConfig {
    pub fn new(n_trees: usize, max_depth: Option<usize>, seed: u64) -> Self {
        Self { n_trees, max_depth, features_per_split: None, bootstrap: true, seed }
    }
}

/// `1 − Σ p_c²`; zero for an empty node.
pub fn gini(counts: [u32; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

fn majority(counts: [u32; 2]) -> Label {
    if counts[Label::Real.index()] > counts[Label::Fake.index()] {
        Label::Real
    } else {
        Label::Fake
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf { counts: [u32; 2] },
    Split { feature: usize, threshold: f64, left: u32, right: u32 },
}

/// Binary tree in an arena; the root is node 0. `x[feature] <= threshold`
/// goes left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

struct SplitChoice {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

fn class_counts(samples: &[usize], ys: &[Label]) -> [u32; 2] {
    let mut c = [0u32; 2];
    for &s in samples {
        c[ys[s].index()] += 1;
    }
    c
}

/// Best threshold for one feature. `entries` are `(value, position)` of the
/// node's non-zero values, sorted by value; absent positions hold 0.
fn best_threshold(entries: &[(f64, usize)], samples: &[usize], ys: &[Label], counts: [u32; 2]) -> Option<(f64, f64)> {
    let mut present = [0u32; 2];
    for &(_, pos) in entries {
        present[ys[samples[pos]].index()] += 1;
    }
    let zeros = [counts[0] - present[0], counts[1] - present[1]];
    // distinct values with their class counts, zero block in sorted position
    let mut blocks: Vec<(f64, [u32; 2])> = Vec::new();
    let push = |v: f64, c: [u32; 2], blocks: &mut Vec<(f64, [u32; 2])>| match blocks.last_mut() {
        Some((last, lc)) if *last == v => {
            lc[0] += c[0];
            lc[1] += c[1];
        }
        _ => blocks.push((v, c)),
    };
    let mut zero_done = zeros == [0, 0];
    for &(v, pos) in entries {
        if !zero_done && v > 0.0 {
            push(0.0, zeros, &mut blocks);
            zero_done = true;
        }
        let mut c = [0u32; 2];
        c[ys[samples[pos]].index()] = 1;
        push(v, c, &mut blocks);
    }
    if !zero_done {
        push(0.0, zeros, &mut blocks);
    }
    if blocks.len() < 2 {
        return None;
    }
    let n = (counts[0] + counts[1]) as f64;
    let mut left = [0u32; 2];
    let mut best: Option<(f64, f64)> = None;
    for w in blocks.windows(2) {
        left[0] += w[0].1[0];
        left[1] += w[0].1[1];
        let right = [counts[0] - left[0], counts[1] - left[1]];
        let nl = (left[0] + left[1]) as f64;
        let impurity = (nl * gini(left) + (n - nl) * gini(right)) / n;
        if best.is_none_or(|(b, _)| impurity < b) {
            let (a, b) = (w[0].0, w[1].0);
            let mid = a + (b - a) / 2.0;
            let threshold = if mid < b { mid } else { a };
            best = Some((impurity, threshold));
        }
    }
    best
}

impl DecisionTree {
    /// Grows a tree on `samples` (indices into `xs`, repeats allowed).
    /// Each split examines up to `k` features that vary within the node.
    pub fn fit(
        xs: &[SparseVector],
        ys: &[Label],
        samples: Vec<usize>,
        max_depth: Option<usize>,
        k: usize,
        rng: &mut impl Rng,
    ) -> Self {
        let mut nodes = vec![Node::Leaf { counts: class_counts(&samples, ys) }];
        let mut stack = vec![(0usize, samples, 0usize)];
        while let Some((id, samples, depth)) = stack.pop() {
            let counts = class_counts(&samples, ys);
            nodes[id] = Node::Leaf { counts };
            let pure = counts[0] == 0 || counts[1] == 0;
            if pure || max_depth.is_some_and(|d| depth >= d) || samples.len() < 2 {
                continue;
            }
            let Some(choice) = Self::choose_split(xs, ys, &samples, counts, k, rng) else {
                continue;
            };
            let (left, right): (Vec<usize>, Vec<usize>) =
                samples.iter().partition(|&&s| xs[s].get(choice.feature) <= choice.threshold);
            let (l, r) = (nodes.len(), nodes.len() + 1);
            nodes.push(Node::Leaf { counts: class_counts(&left, ys) });
            nodes.push(Node::Leaf { counts: class_counts(&right, ys) });
            nodes[id] = Node::Split { feature: choice.feature, threshold: choice.threshold, left: l as u32, right: r as u32 };
            stack.push((r, right, depth + 1));
            stack.push((l, left, depth + 1));
        }
        Self { nodes }
    }

    fn choose_split(
        xs: &[SparseVector],
        ys: &[Label],
        samples: &[usize],
        counts: [u32; 2],
        k: usize,
        rng: &mut impl Rng,
    ) -> Option<SplitChoice> {
        let n = samples.len();
        let mut entries: Vec<(usize, f64, usize)> = Vec::new();
        for (pos, &s) in samples.iter().enumerate() {
            entries.extend(xs[s].iter().map(|(j, v)| (j, v, pos)));
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut groups: Vec<(usize, std::ops::Range<usize>)> = Vec::new();
        let mut start = 0;
        while start < entries.len() {
            let j = entries[start].0;
            let mut end = start;
            while end < entries.len() && entries[end].0 == j {
                end += 1;
            }
            let varies = end - start < n || entries[start].1 != entries[end - 1].1;
            if varies {
                groups.push((j, start..end));
            }
            start = end;
        }
        if groups.is_empty() {
            return None;
        }
        let take = k.max(1).min(groups.len());
        let (chosen, _) = groups.partial_shuffle(rng, take);
        let mut best: Option<SplitChoice> = None;
        for (j, range) in chosen.iter() {
            let vals: Vec<(f64, usize)> = entries[range.clone()].iter().map(|e| (e.1, e.2)).collect();
            if let Some((impurity, threshold)) = best_threshold(&vals, samples, ys, counts) {
                let better = best
                    .as_ref()
                    .is_none_or(|b| impurity < b.impurity || (impurity == b.impurity && *j < b.feature));
                if better {
                    best = Some(SplitChoice { feature: *j, threshold, impurity });
                }
            }
        }
        best
    }

    fn leaf(&self, x: &SparseVector) -> [u32; 2] {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Leaf { counts } => return *counts,
                Node::Split { feature, threshold, left, right } => {
                    id = if x.get(*feature) <= *threshold { *left as usize } else { *right as usize };
                }
            }
        }
    }

    /// Majority class of the reached leaf; ties give Fake.
    pub fn predict(&self, x: &SparseVector) -> Label {
        majority(self.leaf(x))
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], id: usize) -> usize {
            match &nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left as usize).max(go(nodes, *right as usize)),
            }
        }
        go(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub dim: usize,
    pub trees: Vec<DecisionTree>,
    pub max_depth: Option<usize>,
    pub features_per_split: usize,
}

impl Classifier for RandomForest {
    fn dim(&self) -> usize {
        self.dim
    }

    /// `(Real votes − Fake votes) / trees`.
    fn decision_unchecked(&self, x: &SparseVector) -> f64 {
        let real = self.trees.iter().filter(|t| t.predict(x) == Label::Real).count() as f64;
        let n = self.trees.len() as f64;
        (2.0 * real - n) / n
    }
}

/// Bagged Gini trees. Tree seeds are drawn in order from `config.seed`.
pub fn train_forest(xs: &[SparseVector], ys: &[Label], config: &ForestConfig) -> Result<RandomForest, ModelError> {
    if config.n_trees == 0 {
        return Err(ModelError::InvalidHyperparameter("n_trees must be >= 1".into()));
    }
    let dim = check_training(xs, ys)?;
    let k = config.features_per_split.unwrap_or_else(|| (dim as f64).sqrt().ceil() as usize).max(1);
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let n = xs.len();
    let trees = (0..config.n_trees)
        .map(|_| {
            let mut rng = ChaCha8Rng::seed_from_u64(master.gen());
            let samples: Vec<usize> = if config.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            DecisionTree::fit(xs, ys, samples, config.max_depth, k, &mut rng)
        })
        .collect();
    Ok(RandomForest { dim, trees, max_depth: config.max_depth, features_per_split: k })
}
