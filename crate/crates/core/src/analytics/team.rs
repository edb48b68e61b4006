use serde::{Deserialize, Serialize};

use super::{kda, mean, ratio};
use crate::data::MatchRecord;
use crate::draft::HeroId;

/// Team indicators over the rounds where the team picked every hero of
/// `heroes`. Objective counts and duration are per-round means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeamRadar {
    pub team: String,
    pub heroes: Vec<HeroId>,
    pub samples: usize,
    pub win_rate: Option<f64>,
    /// Mean over rounds of the team's summed `(k + a) / max(d, 1)`.
    pub team_kda: Option<f64>,
    pub avg_tyrants: Option<f64>,
    pub avg_dragons: Option<f64>,
    pub avg_towers: Option<f64>,
    pub avg_duration: Option<f64>,
}

pub fn team_radar(records: &[MatchRecord], team: &str, heroes: &[HeroId]) -> TeamRadar {
    let mut samples = 0;
    let mut wins = 0;
    let mut kda_sum = 0.0;
    let mut obj = (0usize, 0.0, 0.0, 0.0);
    let mut duration = 0.0;
    for m in records {
        let Some(side) = m.side_of(team) else { continue };
        let picks: Vec<HeroId> = m.picks(side).collect();
        if !heroes.iter().all(|h| picks.contains(h)) {
            continue;
        }
        samples += 1;
        if m.winner == side {
            wins += 1;
        }
        let (k, d, a) = m
            .players
            .iter()
            .filter(|p| p.side == side)
            .fold((0, 0, 0), |(k, d, a), p| (k + p.kills, d + p.deaths, a + p.assists));
        kda_sum += kda(k, d, a);
        duration += m.duration_minutes;
        if let Some(t) = m.team_stats_for(side) {
            obj.0 += 1;
            obj.1 += t.tyrants as f64;
            obj.2 += t.dragons as f64;
            obj.3 += t.towers_destroyed as f64;
        }
    }
    TeamRadar {
        team: team.to_string(),
        heroes: heroes.to_vec(),
        samples,
        win_rate: ratio(wins, samples),
        team_kda: mean(kda_sum, samples),
        avg_tyrants: mean(obj.1, obj.0),
        avg_dragons: mean(obj.2, obj.0),
        avg_towers: mean(obj.3, obj.0),
        avg_duration: mean(duration, samples),
    }
}
