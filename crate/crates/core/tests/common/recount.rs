//! Brute-force recounts used as oracles for the analytics aggregates. Each
//! one rescans the raw records directly, hero by hero or pair by pair.

use draftcoach_core::data::MatchRecord;
use draftcoach_core::draft::{ActionKind, HeroId, Side};

#[derive(Debug, Default, Clone, PartialEq)]
pub struct HeroCount {
    pub games: usize,
    pub wins: usize,
    pub picks: usize,
    pub bans: usize,
    pub total: usize,
    pub kills: Vec<f64>,
    pub deaths: Vec<f64>,
    pub assists: Vec<f64>,
}

pub fn hero_count(records: &[&MatchRecord], hero: HeroId, team: Option<&str>) -> HeroCount {
    let mut c = HeroCount::default();
    for m in records {
        let own = match team {
            None => None,
            Some(t) if m.blue_team == t => Some(Side::Blue),
            Some(t) if m.red_team == t => Some(Side::Red),
            Some(_) => continue,
        };
        c.total += 1;
        let mut seen = false;
        for s in &m.steps {
            if s.hero != hero {
                continue;
            }
            if s.kind == ActionKind::Ban {
                c.bans += 1;
                seen = true;
            } else if own.map_or(true, |o| o == s.side) {
                c.picks += 1;
                seen = true;
                if s.side == m.winner {
                    c.wins += 1;
                }
            }
        }
        if seen {
            c.games += 1;
        }
        for p in &m.players {
            if p.hero == hero && own.map_or(true, |o| o == p.side) {
                c.kills.push(p.kills as f64);
                c.deaths.push(p.deaths as f64);
                c.assists.push(p.assists as f64);
            }
        }
    }
    c
}

pub fn avg(v: &[f64]) -> Option<f64> {
    if v.is_empty() {
        None
    } else {
        Some(v.iter().sum::<f64>() / v.len() as f64)
    }
}

/// Tukey hinges, computed from explicit index ranges.
pub fn hinges(values: &[f64]) -> (f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    fn med(s: &[f64]) -> f64 {
        let n = s.len();
        if n % 2 == 0 {
            0.5 * (s[n / 2 - 1] + s[n / 2])
        } else {
            s[(n - 1) / 2]
        }
    }
    let n = v.len();
    let (lower, upper) = if n % 2 == 0 {
        (&v[0..n / 2], &v[n / 2..n])
    } else {
        (&v[0..=n / 2], &v[n / 2..n])
    };
    (med(lower), med(&v), med(upper))
}

/// (joint games, joint wins credited to the relation's side).
pub fn pair_count(records: &[MatchRecord], a: HeroId, b: HeroId, same_side: bool, credit_a: bool) -> (usize, usize) {
    let mut games = 0;
    let mut wins = 0;
    for m in records {
        for sa in [Side::Blue, Side::Red] {
            let sb = if same_side { sa } else { sa.other() };
            let a_here = m.steps.iter().any(|s| s.kind == ActionKind::Pick && s.side == sa && s.hero == a);
            let b_here = m.steps.iter().any(|s| s.kind == ActionKind::Pick && s.side == sb && s.hero == b);
            if a_here && b_here && a != b {
                games += 1;
                let credited = if credit_a { sa } else { sb };
                if m.winner == credited {
                    wins += 1;
                }
            }
        }
    }
    (games, wins)
}

pub struct RadarCount {
    pub samples: usize,
    pub wins: usize,
    pub kdas: Vec<f64>,
    pub tyrants: Vec<f64>,
    pub dragons: Vec<f64>,
    pub towers: Vec<f64>,
    pub durations: Vec<f64>,
}

pub fn radar_count(records: &[MatchRecord], team: &str, heroes: &[HeroId]) -> RadarCount {
    let mut r = RadarCount {
        samples: 0,
        wins: 0,
        kdas: vec![],
        tyrants: vec![],
        dragons: vec![],
        towers: vec![],
        durations: vec![],
    };
    for m in records {
        for side in [Side::Blue, Side::Red] {
            let name = if side == Side::Blue { &m.blue_team } else { &m.red_team };
            if name != team {
                continue;
            }
            let ok = heroes.iter().all(|h| {
                m.steps.iter().any(|s| s.kind == ActionKind::Pick && s.side == side && s.hero == *h)
            });
            if !ok {
                continue;
            }
            r.samples += 1;
            r.wins += (m.winner == side) as usize;
            let mut k = 0;
            let mut d = 0;
            let mut a = 0;
            for p in m.players.iter().filter(|p| p.side == side) {
                k += p.kills;
                d += p.deaths;
                a += p.assists;
            }
            r.kdas.push((k + a) as f64 / if d == 0 { 1.0 } else { d as f64 });
            r.durations.push(m.duration_minutes);
            for t in m.team_stats.iter().filter(|t| t.side == side) {
                r.tyrants.push(t.tyrants as f64);
                r.dragons.push(t.dragons as f64);
                r.towers.push(t.towers_destroyed as f64);
            }
        }
    }
    r
}
