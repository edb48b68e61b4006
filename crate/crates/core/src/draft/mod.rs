//! Drafting rules for best-of-N ban/pick series.
//!
//! A round is driven by a [`DraftTemplate`] (the fixed order of ban and pick
//! steps) and recorded in a [`DraftState`]. The [`SeriesState`] carries what
//! survives between rounds: win tallies and the per-team masks of heroes that
//! may no longer be picked under the global ban/pick rule.

mod features;
mod series;
mod state;
mod template;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use features::{encode_features, encode_picks};
pub use series::{GlobalBpPolicy, SeriesState};
pub use state::DraftState;
pub use template::{DraftTemplate, Step, PICKS_PER_SIDE};

/// Hero pool size of the reference league.
pub const DEFAULT_POOL_SIZE: usize = 110;

/// Index of a hero in the pool, `0..pool_size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HeroId(pub u16);

impl HeroId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for HeroId {
    fn from(i: usize) -> Self {
        HeroId(i as u16)
    }
}

impl fmt::Display for HeroId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Map side of a round. Blue is side 1 and drafts first in every template.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Blue,
    Red,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Blue => Side::Red,
            Side::Red => Side::Blue,
        }
    }

    /// Numeric side as used in template strings and state slots (1 or 2).
    pub fn number(self) -> u8 {
        match self {
            Side::Blue => 1,
            Side::Red => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Side> {
        match n {
            1 => Some(Side::Blue),
            2 => Some(Side::Red),
            _ => None,
        }
    }
}

/// The two teams of a series, independent of which side they play in a round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Team {
    Ours,
    Theirs,
}

impl Team {
    pub fn other(self) -> Team {
        match self {
            Team::Ours => Team::Theirs,
            Team::Theirs => Team::Ours,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Team::Ours => 0,
            Team::Theirs => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    Ban,
    Pick,
}

/// Which drafting rule an illegal action broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Hero id outside the pool.
    OutOfRange,
    /// Hero already banned or picked this round.
    Duplicate,
    /// Hero barred by the global ban/pick rule.
    PreviousRound,
    /// No step is pending (round finished or series decided).
    BadPhase,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::OutOfRange => "out_of_range",
            Rule::Duplicate => "duplicate",
            Rule::PreviousRound => "previous_round",
            Rule::BadPhase => "bad_phase",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DraftError {
    #[error("malformed template token `{token}` (expected b1, b2, p1 or p2)")]
    MalformedToken { token: String },
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("invalid series configuration: {0}")]
    InvalidSeries(String),
    #[error("draft is complete, no step is pending")]
    Terminal,
    #[error("round is not finished ({done} of {total} steps)")]
    NotTerminal { done: usize, total: usize },
    #[error("series is already decided")]
    SeriesOver,
    #[error("hero {hero} violates rule {rule}")]
    RuleViolation { rule: Rule, hero: HeroId },
}

pub type Result<T, E = DraftError> = std::result::Result<T, E>;
