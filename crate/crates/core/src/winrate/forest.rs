use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Classifier, Dataset};
use crate::hash::mix_seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    /// Minimum number of training rows in each child of a split.
    pub min_leaf: usize,
    /// Candidate features drawn per node; `None` means `round(sqrt(d))`.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            max_depth: 12,
            min_leaf: 5,
            features_per_split: None,
            bootstrap: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        p: f64,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Binary classification tree stored as a flat node list; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                TreeNode::Leaf { p } => return p,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[TreeNode], i: usize) -> usize {
            match nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }
}

/// Random forest; the prediction is the mean of the tree leaf probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub params: ForestParams,
    n_features: usize,
    trees: Vec<DecisionTree>,
}

impl ForestModel {
    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn from_trees(params: ForestParams, n_features: usize, trees: Vec<DecisionTree>) -> Self {
        ForestModel {
            params,
            n_features,
            trees,
        }
    }
}

impl Classifier for ForestModel {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn score(&self, x: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.predict(x)).sum();
        sum / self.trees.len() as f64
    }
}

/// Fits `params.n_trees` Gini trees, each on its own bootstrap sample with
/// its own seeded feature sampling, so the result depends only on the data
/// and `params.seed`.
///
/// Leaves store the Laplace-smoothed positive fraction `(pos + 1) / (n + 2)`.
/// A training set containing a single class yields trees that predict that
/// class with probability exactly 0 or 1.
pub fn train_rf(train: &Dataset, params: &ForestParams) -> ForestModel {
    let d = train.n_features();
    let n_trees = params.n_trees.max(1);
    let pos = train.labels().iter().filter(|&&y| y == 1).count();
    if train.is_empty() || pos == 0 || pos == train.len() {
        let p = if pos == 0 { 0.0 } else { 1.0 };
        let leaf = DecisionTree {
            nodes: vec![TreeNode::Leaf { p }],
        };
        return ForestModel::from_trees(params.clone(), d, vec![leaf; n_trees]);
    }
    let trees = (0..n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(params.seed, t as u64));
            let n = train.len();
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            TreeBuilder::new(train, params, &mut rng).build(rows)
        })
        .collect();
    ForestModel::from_trees(params.clone(), d, trees)
}

struct TreeBuilder<'a, R> {
    data: &'a Dataset,
    params: &'a ForestParams,
    rng: &'a mut R,
    mtry: usize,
    nodes: Vec<TreeNode>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

impl<'a, R: Rng> TreeBuilder<'a, R> {
    fn new(data: &'a Dataset, params: &'a ForestParams, rng: &'a mut R) -> Self {
        let d = data.n_features();
        let mtry = params
            .features_per_split
            .unwrap_or_else(|| (d as f64).sqrt().round() as usize)
            .clamp(1, d.max(1));
        TreeBuilder {
            data,
            params,
            rng,
            mtry,
            nodes: Vec::new(),
        }
    }

    fn build(mut self, rows: Vec<usize>) -> DecisionTree {
        self.grow(rows, 0);
        DecisionTree { nodes: self.nodes }
    }

    fn leaf(&self, rows: &[usize]) -> TreeNode {
        let pos = rows.iter().filter(|&&i| self.data.labels()[i] == 1).count();
        TreeNode::Leaf {
            p: (pos as f64 + 1.0) / (rows.len() as f64 + 2.0),
        }
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { p: 0.5 });
        let pos = rows.iter().filter(|&&i| self.data.labels()[i] == 1).count();
        let pure = pos == 0 || pos == rows.len();
        let min_leaf = self.params.min_leaf.max(1);
        if pure || depth >= self.params.max_depth || rows.len() < 2 * min_leaf {
            self.nodes[id] = self.leaf(&rows);
            return id;
        }
        let Some(best) = self.find_split(&rows, min_leaf) else {
            self.nodes[id] = self.leaf(&rows);
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&i| self.data.features()[i][best.feature] <= best.threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = TreeNode::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        id
    }

    /// Best Gini split over `mtry` random features. When none of those admits
    /// a valid split, the remaining features are tried in random order until
    /// one does.
    fn find_split(&mut self, rows: &[usize], min_leaf: usize) -> Option<BestSplit> {
        let d = self.data.n_features();
        let mut order: Vec<usize> = (0..d).collect();
        order.shuffle(self.rng);
        let mut best: Option<BestSplit> = None;
        for (k, &f) in order.iter().enumerate() {
            if k >= self.mtry && best.is_some() {
                break;
            }
            if let Some(s) = self.best_for_feature(rows, f, min_leaf) {
                let better = best.as_ref().is_none_or(|b| {
                    s.impurity < b.impurity || (s.impurity == b.impurity && s.feature < b.feature)
                });
                if better {
                    best = Some(s);
                }
            }
        }
        best
    }

    fn best_for_feature(&self, rows: &[usize], f: usize, min_leaf: usize) -> Option<BestSplit> {
        let x = self.data.features();
        let y = self.data.labels();
        let mut vals: Vec<(f64, u8)> = rows.iter().map(|&i| (x[i][f], y[i])).collect();
        vals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = vals.len();
        let total_pos = vals.iter().filter(|v| v.1 == 1).count() as f64;
        let mut left_pos = 0.0;
        let mut best: Option<BestSplit> = None;
        for i in 0..n - 1 {
            left_pos += vals[i].1 as f64;
            if vals[i].0 == vals[i + 1].0 {
                continue;
            }
            let nl = (i + 1) as f64;
            let nr = (n - i - 1) as f64;
            if (i + 1) < min_leaf || (n - i - 1) < min_leaf {
                continue;
            }
            let right_pos = total_pos - left_pos;
            let impurity = nl * gini(left_pos / nl) + nr * gini(right_pos / nr);
            if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                best = Some(BestSplit {
                    feature: f,
                    threshold: 0.5 * (vals[i].0 + vals[i + 1].0),
                    impurity,
                });
            }
        }
        best
    }
}

fn gini(p: f64) -> f64 {
    2.0 * p * (1.0 - p)
}
