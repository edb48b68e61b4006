//! Aggregates over match logs: hero rates, player distributions, team
//! indicators, hero relations and patch windows.
//!
//! Every function is a pure scan over a record slice. Values that have no
//! defined meaning on the selected rounds (a win rate with no picks, an
//! average over zero rounds) are `None`, serialized as `null`.

mod filter;
mod heroes;
mod player;
mod relations;
mod team;

use thiserror::Error;

pub use filter::{Condition, MatchFilter};
pub use heroes::{hero_stats, hero_window, patch_compare, HeroStats, PatchDiff, StatsDiff, TeamOverlay};
pub use player::{player_box_stats, quartiles, PlayerDistribution, PlayerMetric, PlayerPoint, Quartiles};
pub use relations::{relation_table, relations_top3, Relation, RelationEntry, DEFAULT_MIN_SUPPORT};
pub use team::{team_radar, TeamRadar};

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("player {0:?} does not appear in the selected matches")]
    UnknownPlayer(String),
    #[error("no matches for hero {hero} {side} the patch date")]
    EmptyWindow { hero: u16, side: &'static str },
    #[error("min_support must be >= 1")]
    ZeroSupport,
}

pub type Result<T, E = AnalyticsError> = std::result::Result<T, E>;

/// Kill participation ratio with deaths floored at one: `(k + a) / max(d, 1)`.
pub fn kda(kills: u32, deaths: u32, assists: u32) -> f64 {
    (kills as f64 + assists as f64) / deaths.max(1) as f64
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn mean(sum: f64, n: usize) -> Option<f64> {
    (n > 0).then(|| sum / n as f64)
}
