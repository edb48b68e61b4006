use serde::{Deserialize, Serialize};

use super::{Classifier, Dataset, ModelError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Fraction of rows where `p >= 0.5` agrees with the label.
    pub accuracy: f64,
    pub auc: f64,
    pub n_test: usize,
}

/// Area under the ROC curve as the Mann-Whitney statistic:
/// `(#concordant + 0.5 * #tied) / (#pos * #neg)` over positive/negative pairs.
/// Computed through average ranks in `O(n log n)`.
pub fn auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(ModelError::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&y| y == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(ModelError::SingleClass);
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // sum of (1-based, tie-averaged) ranks of positives, doubled to stay integral
    let mut rank_sum2: u128 = 0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && scores[idx[j]] == scores[idx[i]] {
            j += 1;
        }
        let pos_in_group = idx[i..j].iter().filter(|&&k| labels[k] == 1).count() as u128;
        // ranks i+1..=j average to (i + 1 + j) / 2
        rank_sum2 += pos_in_group * (i + 1 + j) as u128;
        i = j;
    }
    let np = n_pos as u128;
    let u2 = rank_sum2 - np * (np + 1);
    Ok(u2 as f64 / 2.0 / (n_pos as f64 * n_neg as f64))
}

pub fn accuracy(scores: &[f64], labels: &[u8]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let hits = scores
        .iter()
        .zip(labels)
        .filter(|(&s, &y)| ((s >= 0.5) as u8) == y)
        .count();
    hits as f64 / labels.len() as f64
}

pub fn evaluate<M: Classifier + ?Sized>(model: &M, test: &Dataset) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(ModelError::TooFewRows { need: 1, have: 0 });
    }
    let scores = test
        .features()
        .iter()
        .map(|x| model.predict_proba(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport {
        accuracy: accuracy(&scores, test.labels()),
        auc: auc(&scores, test.labels())?,
        n_test: test.len(),
    })
}
