use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Classifier, Dataset};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub learning_rate: f64,
    pub epochs: usize,
    /// L2 strength; the penalty is `l2 / 2 * |w|^2` (bias excluded).
    pub l2: f64,
    /// Mini-batch size; `None` runs full-batch gradient descent.
    pub batch_size: Option<usize>,
    pub seed: u64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams {
            learning_rate: 0.5,
            epochs: 300,
            l2: 1e-3,
            batch_size: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub params: LogisticParams,
    /// Full training loss after each epoch.
    pub loss_history: Vec<f64>,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `-log(sigmoid(z))` without overflow.
fn softplus_neg(z: f64) -> f64 {
    (-z).max(0.0) + (-z.abs()).exp().ln_1p()
}

impl LogisticModel {
    /// All-zero weights and bias, predicting 0.5 everywhere.
    pub fn zeros(n_features: usize, params: LogisticParams) -> Self {
        LogisticModel {
            weights: vec![0.0; n_features],
            bias: 0.0,
            params,
            loss_history: Vec::new(),
        }
    }

    fn logit(&self, x: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }

    /// Mean log-loss plus the L2 penalty over `rows` of `data`, and its
    /// gradient as `(d/dw, d/db)`.
    pub fn loss_and_gradient(&self, data: &Dataset, rows: &[usize]) -> (f64, Vec<f64>, f64) {
        let n = rows.len().max(1) as f64;
        let mut gw = vec![0.0; self.weights.len()];
        let mut gb = 0.0;
        let mut loss = 0.0;
        for &i in rows {
            let (x, y) = data.row(i);
            let z = self.logit(x);
            loss += if y == 1 { softplus_neg(z) } else { softplus_neg(-z) };
            let r = sigmoid(z) - y as f64;
            for (g, v) in gw.iter_mut().zip(x) {
                *g += r * v;
            }
            gb += r;
        }
        let l2 = self.params.l2;
        loss = loss / n + 0.5 * l2 * self.weights.iter().map(|w| w * w).sum::<f64>();
        for (g, w) in gw.iter_mut().zip(&self.weights) {
            *g = *g / n + l2 * w;
        }
        (loss, gw, gb / n)
    }

    pub fn full_loss(&self, data: &Dataset) -> f64 {
        let rows: Vec<usize> = (0..data.len()).collect();
        self.loss_and_gradient(data, &rows).0
    }
}

impl Classifier for LogisticModel {
    fn n_features(&self) -> usize {
        self.weights.len()
    }

    fn score(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }
}

/// Gradient descent on the L2-regularised log-loss from zero weights.
pub fn train_lr(train: &Dataset, params: &LogisticParams) -> LogisticModel {
    let mut m = LogisticModel::zeros(train.n_features(), params.clone());
    let n = train.len();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let batch = params.batch_size.unwrap_or(n).clamp(1, n.max(1));
    for _ in 0..params.epochs {
        if n == 0 {
            break;
        }
        if batch < n {
            rows.shuffle(&mut rng);
        }
        for chunk in rows.chunks(batch) {
            let (_, gw, gb) = m.loss_and_gradient(train, chunk);
            for (w, g) in m.weights.iter_mut().zip(&gw) {
                *w -= params.learning_rate * g;
            }
            m.bias -= params.learning_rate * gb;
        }
        let loss = m.full_loss(train);
        m.loss_history.push(loss);
    }
    m
}
