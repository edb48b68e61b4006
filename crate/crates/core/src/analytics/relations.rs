use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AnalyticsError, Result};
use crate::data::MatchRecord;
use crate::draft::{HeroId, Side};

pub const DEFAULT_MIN_SUPPORT: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Picked on the same side; rate is that side's win rate.
    Synergy,
    /// Picked against; rate is the hero's side win rate.
    Counters,
    /// Picked against; rate is the other hero's side win rate.
    CounteredBy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub other: HeroId,
    pub relation: Relation,
    pub joint_games: usize,
    pub joint_wins: usize,
    pub rate: f64,
}

/// Every partner or opponent of `hero` with at least `min_support` joint
/// rounds, best rate first, then more joint rounds, then lower id.
pub fn relation_table(
    records: &[MatchRecord],
    hero: HeroId,
    relation: Relation,
    min_support: usize,
) -> Result<Vec<RelationEntry>> {
    if min_support == 0 {
        return Err(AnalyticsError::ZeroSupport);
    }
    let mut acc: BTreeMap<HeroId, (usize, usize)> = BTreeMap::new();
    for m in records {
        let Some(side) = [Side::Blue, Side::Red].into_iter().find(|&s| m.picks(s).any(|h| h == hero)) else {
            continue;
        };
        let (others, credited) = match relation {
            Relation::Synergy => (side, side),
            Relation::Counters => (side.other(), side),
            Relation::CounteredBy => (side.other(), side.other()),
        };
        for o in m.picks(others).filter(|&o| o != hero) {
            let e = acc.entry(o).or_default();
            e.0 += 1;
            if m.winner == credited {
                e.1 += 1;
            }
        }
    }
    let mut out: Vec<RelationEntry> = acc
        .into_iter()
        .filter(|(_, (g, _))| *g >= min_support)
        .map(|(other, (g, w))| RelationEntry {
            other,
            relation,
            joint_games: g,
            joint_wins: w,
            rate: w as f64 / g as f64,
        })
        .collect();
    out.sort_by(|a, b| {
        b.rate
            .total_cmp(&a.rate)
            .then(b.joint_games.cmp(&a.joint_games))
            .then(a.other.cmp(&b.other))
    });
    Ok(out)
}

pub fn relations_top3(
    records: &[MatchRecord],
    hero: HeroId,
    relation: Relation,
    min_support: usize,
) -> Result<Vec<RelationEntry>> {
    let mut t = relation_table(records, hero, relation, min_support)?;
    t.truncate(3);
    Ok(t)
}
