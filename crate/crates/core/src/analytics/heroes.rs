use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{mean, ratio, AnalyticsError, MatchFilter, Result};
use crate::data::MatchRecord;
use crate::draft::{ActionKind, HeroId, Side};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeroStats {
    pub hero: HeroId,
    /// Rounds in which the hero was picked or banned.
    pub games: usize,
    pub wins: usize,
    pub picks: usize,
    pub bans: usize,
    /// Rounds in the selection.
    pub matches_total: usize,
    /// `wins / picks`.
    pub win_rate: Option<f64>,
    pub picked_rate: Option<f64>,
    pub banned_rate: Option<f64>,
    /// Per-player-round means over rounds where the hero was played.
    pub avg_kills: Option<f64>,
    pub avg_deaths: Option<f64>,
    pub avg_assists: Option<f64>,
}

#[derive(Default)]
struct Acc {
    games: usize,
    wins: usize,
    picks: usize,
    bans: usize,
    rows: usize,
    kills: f64,
    deaths: f64,
    assists: f64,
}

impl Acc {
    fn finish(&self, hero: HeroId, total: usize) -> HeroStats {
        HeroStats {
            hero,
            games: self.games,
            wins: self.wins,
            picks: self.picks,
            bans: self.bans,
            matches_total: total,
            win_rate: ratio(self.wins, self.picks),
            picked_rate: ratio(self.picks, total),
            banned_rate: ratio(self.bans, total),
            avg_kills: mean(self.kills, self.rows),
            avg_deaths: mean(self.deaths, self.rows),
            avg_assists: mean(self.assists, self.rows),
        }
    }
}

/// Adds one round to the per-hero accumulators. With `own` set, only picks
/// and player rows of that side count; bans always count.
fn scan(m: &MatchRecord, own: Option<Side>, acc: &mut BTreeMap<HeroId, Acc>) {
    let counts = |s: Side| own.is_none_or(|o| o == s);
    let mut touched: Vec<HeroId> = Vec::new();
    for step in &m.steps {
        match step.kind {
            ActionKind::Ban => {
                acc.entry(step.hero).or_default().bans += 1;
            }
            ActionKind::Pick => {
                if !counts(step.side) {
                    continue;
                }
                let a = acc.entry(step.hero).or_default();
                a.picks += 1;
                if m.winner == step.side {
                    a.wins += 1;
                }
            }
        }
        if step.kind == ActionKind::Ban || counts(step.side) {
            if !touched.contains(&step.hero) {
                touched.push(step.hero);
                acc.entry(step.hero).or_default().games += 1;
            }
        }
    }
    for p in m.players.iter().filter(|p| counts(p.side)) {
        let a = acc.entry(p.hero).or_default();
        a.rows += 1;
        a.kills += p.kills as f64;
        a.deaths += p.deaths as f64;
        a.assists += p.assists as f64;
    }
}

/// Per-hero statistics over the rounds accepted by `filter`. Heroes never
/// picked or banned in those rounds are omitted.
pub fn hero_stats(records: &[MatchRecord], filter: &MatchFilter) -> BTreeMap<HeroId, HeroStats> {
    let mut acc = BTreeMap::new();
    let mut total = 0;
    for m in filter.apply(records) {
        total += 1;
        scan(m, None, &mut acc);
    }
    acc.iter().map(|(&h, a)| (h, a.finish(h, total))).collect()
}

/// Statistics of one hero over the filtered rounds, present even when the
/// hero never appears. With `team`, rounds are restricted to that team and
/// picks, wins and player rows to its side.
pub fn hero_window(
    records: &[MatchRecord],
    hero: HeroId,
    filter: &MatchFilter,
    team: Option<&str>,
) -> HeroStats {
    let mut acc = BTreeMap::new();
    let mut total = 0;
    for m in filter.apply(records) {
        let own = match team {
            Some(t) => match m.side_of(t) {
                Some(s) => Some(s),
                None => continue,
            },
            None => None,
        };
        total += 1;
        scan(m, own, &mut acc);
    }
    acc.remove(&hero).unwrap_or_default().finish(hero, total)
}

/// After minus before, field by field; `None` when either side is.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDiff {
    pub win_rate: Option<f64>,
    pub picked_rate: Option<f64>,
    pub banned_rate: Option<f64>,
    pub avg_kills: Option<f64>,
    pub avg_deaths: Option<f64>,
    pub avg_assists: Option<f64>,
}

impl StatsDiff {
    fn between(before: &HeroStats, after: &HeroStats) -> Self {
        let d = |a: Option<f64>, b: Option<f64>| Some(b? - a?);
        StatsDiff {
            win_rate: d(before.win_rate, after.win_rate),
            picked_rate: d(before.picked_rate, after.picked_rate),
            banned_rate: d(before.banned_rate, after.banned_rate),
            avg_kills: d(before.avg_kills, after.avg_kills),
            avg_deaths: d(before.avg_deaths, after.avg_deaths),
            avg_assists: d(before.avg_assists, after.avg_assists),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeamOverlay {
    pub team: String,
    pub before: HeroStats,
    pub after: HeroStats,
    pub diff: StatsDiff,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchDiff {
    pub hero: HeroId,
    pub patch_date: NaiveDate,
    /// Rounds dated strictly before the patch date.
    pub before: HeroStats,
    /// Rounds on or after the patch date.
    pub after: HeroStats,
    pub diff: StatsDiff,
    pub team: Option<TeamOverlay>,
}

/// Splits the log at `patch_date` and compares the hero's windows.
pub fn patch_compare(
    records: &[MatchRecord],
    patch_date: NaiveDate,
    hero: HeroId,
    team: Option<&str>,
) -> Result<PatchDiff> {
    let before_f = MatchFilter::all().before(patch_date);
    let after_f = MatchFilter::all().from(patch_date);
    let before = hero_window(records, hero, &before_f, None);
    let after = hero_window(records, hero, &after_f, None);
    for (w, side) in [(&before, "before"), (&after, "after")] {
        if w.matches_total == 0 {
            return Err(AnalyticsError::EmptyWindow { hero: hero.0, side });
        }
    }
    let team = team.map(|t| {
        let before = hero_window(records, hero, &before_f, Some(t));
        let after = hero_window(records, hero, &after_f, Some(t));
        TeamOverlay { team: t.to_string(), diff: StatsDiff::between(&before, &after), before, after }
    });
    Ok(PatchDiff {
        hero,
        patch_date,
        diff: StatsDiff::between(&before, &after),
        before,
        after,
        team,
    })
}
