//! Round outcome predictors trained on encoded drafts.
//!
//! The random forest is the model used by the recommender; logistic
//! regression is kept as a linear baseline. Both map the `2 * pool_size`
//! pick encoding from [`crate::draft::encode_features`] to the probability
//! that blue wins.

mod dataset;
mod forest;
mod logistic;
mod metrics;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::draft::{encode_features, DraftState};

pub use dataset::Dataset;
pub use forest::{train_rf, DecisionTree, ForestModel, ForestParams, TreeNode};
pub use logistic::{sigmoid, train_lr, LogisticModel, LogisticParams};
pub use metrics::{accuracy, auc, evaluate, EvalReport};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("feature vector has {got} entries, model expects {expected}")]
    FeatureLength { expected: usize, got: usize },
    #[error("dataset rows disagree on feature length ({expected} vs {got})")]
    RaggedDataset { expected: usize, got: usize },
    #[error("label {0} is not binary")]
    BadLabel(u8),
    #[error("need at least {need} rows, have {have}")]
    TooFewRows { need: usize, have: usize },
    #[error("split ratio {0} must lie strictly between 0 and 1")]
    BadRatio(f64),
    #[error("AUC is undefined unless both classes are present")]
    SingleClass,
    #[error("scores and labels differ in length ({scores} vs {labels})")]
    LengthMismatch { scores: usize, labels: usize },
    #[error("invalid model artifact: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

/// Probability of the positive class (blue wins) for a feature vector.
pub trait Classifier {
    fn n_features(&self) -> usize;

    /// Unchecked prediction; `x.len()` must equal `n_features()`.
    fn score(&self, x: &[f64]) -> f64;

    fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features() {
            return Err(ModelError::FeatureLength {
                expected: self.n_features(),
                got: x.len(),
            });
        }
        Ok(self.score(x))
    }
}

/// Scores a round: probability that the blue side wins given the picks made
/// so far. Partial drafts are allowed.
pub trait RoundPredictor: Send + Sync {
    fn blue_win_probability(&self, state: &DraftState) -> f64;
}

/// A trained model as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum WinModel {
    Forest(ForestModel),
    Logistic(LogisticModel),
}

pub const FORMAT_NAME: &str = "draftcoach-winmodel";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct WinModelArtifact {
    format: String,
    version: u32,
    model: WinModel,
}

impl WinModel {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&WinModelArtifact {
            format: FORMAT_NAME.into(),
            version: FORMAT_VERSION,
            model: self.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let art: WinModelArtifact = serde_json::from_str(text)?;
        if art.format != FORMAT_NAME || art.version != FORMAT_VERSION {
            return Err(ModelError::Format(format!(
                "expected {FORMAT_NAME} v{FORMAT_VERSION}, found {} v{}",
                art.format, art.version
            )));
        }
        Ok(art.model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

impl Classifier for WinModel {
    fn n_features(&self) -> usize {
        match self {
            WinModel::Forest(m) => m.n_features(),
            WinModel::Logistic(m) => m.n_features(),
        }
    }

    fn score(&self, x: &[f64]) -> f64 {
        match self {
            WinModel::Forest(m) => m.score(x),
            WinModel::Logistic(m) => m.score(x),
        }
    }
}

macro_rules! round_predictor_via_features {
    ($($t:ty),*) => {$(
        impl RoundPredictor for $t {
            fn blue_win_probability(&self, state: &DraftState) -> f64 {
                let x = encode_features(state);
                if x.len() == self.n_features() {
                    self.score(&x)
                } else {
                    0.5
                }
            }
        }
    )*};
}

round_predictor_via_features!(WinModel, ForestModel, LogisticModel);

/// Predictor returning the same probability for every round.
#[derive(Clone, Copy, Debug)]
pub struct ConstantPredictor(pub f64);

impl RoundPredictor for ConstantPredictor {
    fn blue_win_probability(&self, _state: &DraftState) -> f64 {
        self.0
    }
}

/// Adapter for closures over the blue and red pick lists.
pub struct FnPredictor<F>(pub F);

impl<F> RoundPredictor for FnPredictor<F>
where
    F: Fn(&[crate::draft::HeroId], &[crate::draft::HeroId]) -> f64 + Send + Sync,
{
    fn blue_win_probability(&self, state: &DraftState) -> f64 {
        use crate::draft::Side;
        (self.0)(&state.picks(Side::Blue), &state.picks(Side::Red))
    }
}
