use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ModelError, Result};

/// Feature rows with binary labels (1 = blue won).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<u8>,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        let mut d = Dataset::default();
        if features.len() != labels.len() {
            return Err(ModelError::LengthMismatch {
                scores: features.len(),
                labels: labels.len(),
            });
        }
        for (x, y) in features.into_iter().zip(labels) {
            d.push(x, y)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, x: Vec<f64>, y: u8) -> Result<()> {
        if y > 1 {
            return Err(ModelError::BadLabel(y));
        }
        if let Some(first) = self.features.first() {
            if first.len() != x.len() {
                return Err(ModelError::RaggedDataset {
                    expected: first.len(),
                    got: x.len(),
                });
            }
        }
        self.features.push(x);
        self.labels.push(y);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, |x| x.len())
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> (&[f64], u8) {
        (&self.features[i], self.labels[i])
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            features: idx.iter().map(|&i| self.features[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Shuffled train/test partition with `round(n * ratio)` training rows,
    /// kept within `1..n` so both parts are nonempty.
    pub fn split(&self, ratio: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        let n = self.len();
        if n < 2 {
            return Err(ModelError::TooFewRows { need: 2, have: n });
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(ModelError::BadRatio(ratio));
        }
        let n_train = ((n as f64 * ratio).round() as usize).clamp(1, n - 1);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Ok((self.subset(&idx[..n_train]), self.subset(&idx[n_train..])))
    }
}
