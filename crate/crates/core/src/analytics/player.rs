use serde::{Deserialize, Serialize};

use super::{kda, AnalyticsError, Result};
use crate::data::{MatchRecord, PlayerRoundStats};
use crate::draft::HeroId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlayerMetric {
    Kills,
    Deaths,
    Assists,
    Kda,
    Damage,
    DamageTaken,
    Gold,
    GoldPerMinute,
    DamagePerMinute,
    /// `(k + a) / team kills`, 0 when the team scored no kills.
    Participation,
}

impl PlayerMetric {
    pub const ALL: [PlayerMetric; 10] = [
        PlayerMetric::Kills,
        PlayerMetric::Deaths,
        PlayerMetric::Assists,
        PlayerMetric::Kda,
        PlayerMetric::Damage,
        PlayerMetric::DamageTaken,
        PlayerMetric::Gold,
        PlayerMetric::GoldPerMinute,
        PlayerMetric::DamagePerMinute,
        PlayerMetric::Participation,
    ];

    pub fn value(self, row: &PlayerRoundStats, m: &MatchRecord) -> f64 {
        match self {
            PlayerMetric::Kills => row.kills as f64,
            PlayerMetric::Deaths => row.deaths as f64,
            PlayerMetric::Assists => row.assists as f64,
            PlayerMetric::Kda => kda(row.kills, row.deaths, row.assists),
            PlayerMetric::Damage => row.damage,
            PlayerMetric::DamageTaken => row.damage_taken,
            PlayerMetric::Gold => row.gold,
            PlayerMetric::GoldPerMinute => row.gold / row.minutes,
            PlayerMetric::DamagePerMinute => row.damage / row.minutes,
            PlayerMetric::Participation => {
                let team_kills: u32 =
                    m.players.iter().filter(|p| p.side == row.side).map(|p| p.kills).sum();
                if team_kills == 0 {
                    0.0
                } else {
                    (row.kills + row.assists) as f64 / team_kills as f64
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Inclusive-median quartiles (Tukey hinges): the halves below and above
/// the median both include the median itself when the count is odd.
/// `None` for an empty slice.
pub fn quartiles(values: &[f64]) -> Option<Quartiles> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let half = n.div_ceil(2);
    Some(Quartiles {
        q1: median_sorted(&v[..half]),
        median: median_sorted(&v),
        q3: median_sorted(&v[n - half..]),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerPoint {
    pub match_id: String,
    pub hero: HeroId,
    pub value: f64,
    /// Set when the point was played on the highlighted hero.
    pub highlighted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerDistribution {
    pub player: String,
    pub metric: PlayerMetric,
    /// Whisker ends: the extreme values inside 1.5 IQR of the box.
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub outliers: Vec<f64>,
    /// One point per round, in record order.
    pub points: Vec<PlayerPoint>,
}

pub fn player_box_stats(
    records: &[MatchRecord],
    player: &str,
    metric: PlayerMetric,
    highlight: Option<HeroId>,
) -> Result<PlayerDistribution> {
    let points: Vec<PlayerPoint> = records
        .iter()
        .flat_map(|m| {
            m.players.iter().filter(|p| p.player == player).map(move |p| PlayerPoint {
                match_id: m.match_id.clone(),
                hero: p.hero,
                value: metric.value(p, m),
                highlighted: highlight == Some(p.hero),
            })
        })
        .collect();
    let values: Vec<f64> = points.iter().map(|p| p.value).collect();
    let q = quartiles(&values).ok_or_else(|| AnalyticsError::UnknownPlayer(player.to_string()))?;
    let iqr = q.q3 - q.q1;
    let (lo, hi) = (q.q1 - 1.5 * iqr, q.q3 + 1.5 * iqr);
    let inside = values.iter().copied().filter(|v| (lo..=hi).contains(v));
    let min = inside.clone().fold(f64::INFINITY, f64::min);
    let max = inside.fold(f64::NEG_INFINITY, f64::max);
    let mut outliers: Vec<f64> = values.iter().copied().filter(|v| !(lo..=hi).contains(v)).collect();
    outliers.sort_by(f64::total_cmp);
    Ok(PlayerDistribution {
        player: player.to_string(),
        metric,
        min,
        q1: q.q1,
        median: q.median,
        q3: q.q3,
        max,
        outliers,
        points,
    })
}
