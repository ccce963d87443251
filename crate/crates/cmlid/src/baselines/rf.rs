//! Random forest over sparse count vectors: bootstrap sampling per tree,
//! sqrt feature subsampling per split, Gini impurity splits, and mean
//! decrease in impurity (MDI) feature importances normalized to sum 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::LangLabel;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::par;

/// One node of a decision tree. Samples with `value <= threshold` go left.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        /// Label distribution at the leaf; sums to 1.
        distribution: [f64; 4],
    },
    Split {
        feature: u32,
        threshold: f64,
        /// Gini decrease weighted by the fraction of the tree's samples
        /// reaching this node; feeds the MDI importances.
        weighted_decrease: f64,
        samples: usize,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    fn leaf_distribution(&self, vector: &SparseVector) -> &[f64; 4] {
        match self {
            TreeNode::Leaf { distribution } => distribution,
            TreeNode::Split { feature, threshold, left, right, .. } => {
                if vector.get(*feature) <= *threshold {
                    left.leaf_distribution(vector)
                } else {
                    right.leaf_distribution(vector)
                }
            }
        }
    }

    fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    root: TreeNode,
}

impl DecisionTree {
    pub fn new(root: TreeNode) -> DecisionTree {
        DecisionTree { root }
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn is_single_leaf(&self) -> bool {
        self.root.is_leaf()
    }

    /// Distribution of the leaf this vector falls into.
    pub fn predict_distribution(&self, vector: &SparseVector) -> [f64; 4] {
        *self.root.leaf_distribution(vector)
    }

    /// Argmax of the leaf distribution, ties broken in label order.
    pub fn predict(&self, vector: &SparseVector) -> LangLabel {
        LangLabel::from_index(argmax(&self.predict_distribution(vector)))
    }
}

/// How many candidate features each split considers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxFeatures {
    /// ceil(sqrt(d)) features, sampled without replacement.
    Sqrt,
    /// All features, in id order.
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RfModel {
    trees: Vec<DecisionTree>,
    seed: u64,
    n_features: usize,
    importance: Vec<f64>,
}

impl RfModel {
    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// MDI feature importances; non-negative and summing to 1, or all zero
    /// when no tree contains a split.
    pub fn importance(&self) -> &[f64] {
        &self.importance
    }

    pub(crate) fn from_parts(
        trees: Vec<DecisionTree>,
        seed: u64,
        n_features: usize,
        importance: Vec<f64>,
    ) -> RfModel {
        RfModel { trees, seed, n_features, importance }
    }
}

/// Trains `n_trees` trees, each on its own bootstrap sample, with one RNG
/// stream per tree derived from `(seed, tree index)`. Trees may be built
/// concurrently; the result is identical for any worker count.
pub fn train_rf(
    vectors: &[SparseVector],
    labels: &[LangLabel],
    n_trees: usize,
    max_features: MaxFeatures,
    seed: u64,
) -> Result<RfModel> {
    if vectors.len() != labels.len() {
        return Err(Error::LengthMismatch { vectors: vectors.len(), labels: labels.len() });
    }
    if vectors.is_empty() || n_trees == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    let n_features = vectors
        .iter()
        .flat_map(SparseVector::iter)
        .map(|(id, _)| id as usize + 1)
        .max()
        .unwrap_or(0);
    let built = par::map_range(n_trees, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(tree_seed(seed, t as u64));
        let n = vectors.len();
        let sample: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let mut importance = vec![0.0f64; n_features];
        let root = build_node(
            vectors,
            labels,
            &sample,
            n,
            n_features,
            max_features,
            &mut rng,
            &mut importance,
        );
        (DecisionTree::new(root), importance)
    });
    let mut trees = Vec::with_capacity(n_trees);
    let mut importance = vec![0.0f64; n_features];
    for (tree, tree_importance) in built {
        trees.push(tree);
        for (total, part) in importance.iter_mut().zip(&tree_importance) {
            *total += part;
        }
    }
    for value in &mut importance {
        *value /= n_trees as f64;
    }
    let total: f64 = importance.iter().sum();
    if total > 0.0 {
        for value in &mut importance {
            *value /= total;
        }
    }
    Ok(RfModel { trees, seed, n_features, importance })
}

fn tree_seed(seed: u64, tree: u64) -> u64 {
    seed.wrapping_add((tree + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[allow(clippy::too_many_arguments)]
fn build_node(
    vectors: &[SparseVector],
    labels: &[LangLabel],
    sample: &[usize],
    n_root: usize,
    n_features: usize,
    max_features: MaxFeatures,
    rng: &mut ChaCha8Rng,
    importance: &mut [f64],
) -> TreeNode {
    let counts = label_counts(labels, sample);
    let n = sample.len();
    let node_gini = gini(&counts, n);
    if n < 2 || node_gini == 0.0 || n_features == 0 {
        return leaf(&counts, n);
    }
    let candidates: Vec<u32> = match max_features {
        MaxFeatures::All => (0..n_features as u32).collect(),
        MaxFeatures::Sqrt => {
            let m = (n_features as f64).sqrt().ceil() as usize;
            rand::seq::index::sample(rng, n_features, m.min(n_features))
                .into_iter()
                .map(|i| i as u32)
                .collect()
        }
    };
    let mut best: Option<(f64, u32, f64)> = None; // (decrease, feature, threshold)
    for &feature in &candidates {
        let mut values: Vec<f64> = sample.iter().map(|&i| vectors[i].get(feature)).collect();
        values.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        for pair in values.windows(2) {
            let threshold = (pair[0] + pair[1]) / 2.0;
            let mut left_counts = [0u64; 4];
            let mut left_n = 0usize;
            for &i in sample {
                if vectors[i].get(feature) <= threshold {
                    left_counts[labels[i].index()] += 1;
                    left_n += 1;
                }
            }
            let right_n = n - left_n;
            if left_n == 0 || right_n == 0 {
                continue;
            }
            let right_counts: [u64; 4] =
                std::array::from_fn(|c| counts[c] - left_counts[c]);
            let decrease = node_gini
                - (left_n as f64 / n as f64) * gini(&left_counts, left_n)
                - (right_n as f64 / n as f64) * gini(&right_counts, right_n);
            if decrease > 1e-12 && best.is_none_or(|(d, _, _)| decrease > d) {
                best = Some((decrease, feature, threshold));
            }
        }
    }
    let Some((decrease, feature, threshold)) = best else {
        return leaf(&counts, n);
    };
    let weighted_decrease = (n as f64 / n_root as f64) * decrease;
    importance[feature as usize] += weighted_decrease;
    let (left_sample, right_sample): (Vec<usize>, Vec<usize>) =
        sample.iter().partition(|&&i| vectors[i].get(feature) <= threshold);
    let left = build_node(
        vectors, labels, &left_sample, n_root, n_features, max_features, rng, importance,
    );
    let right = build_node(
        vectors, labels, &right_sample, n_root, n_features, max_features, rng, importance,
    );
    TreeNode::Split {
        feature,
        threshold,
        weighted_decrease,
        samples: n,
        left: Box::new(left),
        right: Box::new(right),
    }
}

fn label_counts(labels: &[LangLabel], sample: &[usize]) -> [u64; 4] {
    let mut counts = [0u64; 4];
    for &i in sample {
        counts[labels[i].index()] += 1;
    }
    counts
}

fn gini(counts: &[u64; 4], n: usize) -> f64 {
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

fn leaf(counts: &[u64; 4], n: usize) -> TreeNode {
    TreeNode::Leaf { distribution: std::array::from_fn(|c| counts[c] as f64 / n as f64) }
}

fn argmax(values: &[f64; 4]) -> usize {
    let mut best = 0;
    for c in 1..4 {
        if values[c] > values[best] {
            best = c;
        }
    }
    best
}

/// Majority vote over trees. Vote ties fall back to summed leaf
/// distributions, then to label order.
pub fn predict_rf(model: &RfModel, vector: &SparseVector) -> LangLabel {
    let mut votes = [0u32; 4];
    let mut summed = [0.0f64; 4];
    for tree in model.trees() {
        let distribution = tree.predict_distribution(vector);
        votes[argmax(&distribution)] += 1;
        for c in 0..4 {
            summed[c] += distribution[c];
        }
    }
    let top_votes = *votes.iter().max().unwrap();
    let mut best: Option<usize> = None;
    for c in 0..4 {
        if votes[c] == top_votes {
            best = match best {
                None => Some(c),
                Some(b) if summed[c] > summed[b] => Some(c),
                keep => keep,
            };
        }
    }
    LangLabel::from_index(best.unwrap())
}

/// The model's stored MDI importances (computed at training time).
pub fn feature_importance_mdi(model: &RfModel) -> &[f64] {
    model.importance()
}
