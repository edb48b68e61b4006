//! Two-player UCT search over the rest of the current draft and every
//! remaining round of the series, plus the baselines and the series
//! experiment harness used to compare drafting policies.
//!
//! Rewards are always stored from our team's perspective in units of rounds
//! won; the opponent's preference is obtained by flipping inside selection.

mod baseline;
mod path;
mod rollout;
mod tree;
mod uct;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::draft::{DraftError, Team};
use crate::markov::{MarkovError, TransitionModel};
use crate::winrate::RoundPredictor;

pub use baseline::{
    baseline_hwr, baseline_random, run_series_experiment, DraftPolicy, ExperimentResult,
    ExperimentSetup,
};
pub use path::{build_path, compare_drafts, Alternative, DraftComparison, DraftPath, PathStep, StepSource};
pub use rollout::{rollout, series_win_probability};
pub use tree::{predict_opponent, recommend, NodeId, RankedAction, Recommendation, SearchNode, SearchTree};
pub use uct::{uct_score, uct_select, ChildStats};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RolloutPolicy {
    /// Draw each step from the transition model; uniform where it has no data.
    #[default]
    MarkovSampled,
    UniformLegal,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardMode {
    /// Sum of our round win probabilities over the remaining rounds.
    #[default]
    ExpectedWins,
    /// Sum of Bernoulli draws of those probabilities.
    BernoulliSampled,
    /// Probability that our team takes the series, given the wins so far.
    SeriesWinProbability,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MctsConfig {
    /// Exploration constant.
    pub c: f64,
    pub iterations: usize,
    /// Maximum number of actions expanded per node, taken from the
    /// transition model's most likely heroes.
    pub candidate_breadth: usize,
    pub rollout_policy: RolloutPolicy,
    pub reward_mode: RewardMode,
    pub seed: u64,
}

impl Default for MctsConfig {
    fn default() -> Self {
        MctsConfig {
            c: std::f64::consts::SQRT_2,
            iterations: 10_000,
            candidate_breadth: 10,
            rollout_policy: RolloutPolicy::MarkovSampled,
            reward_mode: RewardMode::ExpectedWins,
            seed: 0,
        }
    }
}

impl MctsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c >= 0.0) || !self.c.is_finite() {
            return Err(MctsError::InvalidConfig("c must be a finite value >= 0".into()));
        }
        if self.iterations == 0 {
            return Err(MctsError::InvalidConfig("iterations must be >= 1".into()));
        }
        if self.candidate_breadth == 0 {
            return Err(MctsError::InvalidConfig("candidate_breadth must be >= 1".into()));
        }
        Ok(())
    }
}

/// Read-only models shared by every search.
#[derive(Clone, Copy)]
pub struct Models<'a> {
    pub win: &'a dyn RoundPredictor,
    pub markov: Option<&'a TransitionModel>,
}

impl<'a> Models<'a> {
    pub fn new(win: &'a dyn RoundPredictor, markov: Option<&'a TransitionModel>) -> Self {
        Models { win, markov }
    }
}

#[derive(Debug, Error)]
pub enum MctsError {
    #[error("wrong turn: {actual:?} team to act, expected {expected:?}")]
    WrongTurn { expected: Team, actual: Team },
    #[error("no legal action at the pending step")]
    NoLegalAction,
    #[error("node has no expanded children")]
    Unexpanded,
    #[error("child {hero} has not been visited")]
    UnvisitedChild { hero: crate::draft::HeroId },
    #[error("depth {depth} exceeds the {remaining} remaining steps")]
    DepthTooLarge { depth: usize, remaining: usize },
    #[error("draft {index} is not a finished round")]
    NotTerminal { index: usize },
    #[error("invalid search config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Draft(#[from] DraftError),
    #[error(transparent)]
    Markov(#[from] MarkovError),
}

pub type Result<T, E = MctsError> = std::result::Result<T, E>;
