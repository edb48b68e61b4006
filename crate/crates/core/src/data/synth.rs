use std::sync::Arc;

use chrono::{Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use super::schema::{
    resolve_template, HeroInfo, MatchLogFile, MatchRecord, PlayerRoundStats, StepRecord,
    TeamInfo, TeamRoundStats,
};
use super::{DataError, Result};
use crate::draft::{
    ActionKind, DraftState, GlobalBpPolicy, HeroId, SeriesState, Side, Team, PICKS_PER_SIDE,
};
use crate::winrate::RoundPredictor;

pub const ROLES: [&str; 5] = ["clash", "jungle", "mid", "farm", "roam"];

/// Strength change applied to one hero from a given series onwards.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchShift {
    pub at_series: usize,
    pub patch: String,
    pub hero: HeroId,
    pub strength_delta: f64,
}

/// Latent league used to generate match logs with a known answer.
///
/// A lineup's score is the sum of its hero strengths, plus the synergy of
/// every pair inside the lineup, plus its counter value against every enemy
/// hero. Blue wins with probability `sigmoid((score_blue - score_red) / tau)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub n_heroes: usize,
    pub strength: Vec<f64>,
    /// Row-major `n_heroes x n_heroes`, symmetric with zero diagonal.
    pub synergy: Vec<f64>,
    /// Row-major `n_heroes x n_heroes`, antisymmetric.
    pub counter: Vec<f64>,
    pub tau: f64,
    /// Softmax temperature of the drafting agents; larger is more random.
    pub agent_temperature: f64,
    pub n_teams: usize,
    /// Skill offset per player, `n_teams * 5` entries, team-major.
    pub player_skill: Vec<f64>,
    pub best_of: usize,
    pub policy: GlobalBpPolicy,
    pub template: String,
    pub start_date: NaiveDate,
    pub patch_shift: Option<PatchShift>,
    pub seed: u64,
}

impl SyntheticConfig {
    /// League with no draft signal at all (every round is a coin flip).
    pub fn flat(n_heroes: usize, seed: u64) -> Self {
        SyntheticConfig {
            n_heroes,
            strength: vec![0.0; n_heroes],
            synergy: vec![0.0; n_heroes * n_heroes],
            counter: vec![0.0; n_heroes * n_heroes],
            tau: 1.0,
            agent_temperature: 1.0,
            n_teams: 8,
            player_skill: vec![0.0; 8 * 5],
            best_of: 3,
            policy: GlobalBpPolicy::EitherTeam,
            template: "hok".into(),
            start_date: NaiveDate::from_ymd_opt(2023, 1, 1).expect("valid date"),
            patch_shift: None,
            seed,
        }
    }

    /// Gaussian strengths, synergies and counters with the given standard
    /// deviations; the latent parameters are drawn from `seed`.
    pub fn random(n_heroes: usize, strength_sd: f64, synergy_sd: f64, counter_sd: f64, seed: u64) -> Self {
        let mut c = Self::flat(n_heroes, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1a7e_57a7_0001);
        let mut normal = |sd: f64| -> f64 {
            let z: f64 = StandardNormal.sample(&mut rng);
            z * sd
        };
        c.strength = (0..n_heroes).map(|_| normal(strength_sd)).collect();
        for i in 0..n_heroes {
            for j in (i + 1)..n_heroes {
                let s = normal(synergy_sd);
                c.synergy[i * n_heroes + j] = s;
                c.synergy[j * n_heroes + i] = s;
                let k = normal(counter_sd);
                c.counter[i * n_heroes + j] = k;
                c.counter[j * n_heroes + i] = -k;
            }
        }
        c.player_skill = (0..c.n_teams * 5).map(|_| normal(0.3)).collect();
        c
    }

    pub fn synergy_of(&self, a: HeroId, b: HeroId) -> f64 {
        self.synergy[a.index() * self.n_heroes + b.index()]
    }

    pub fn counter_of(&self, a: HeroId, b: HeroId) -> f64 {
        self.counter[a.index() * self.n_heroes + b.index()]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_heroes;
        let bad = |m: &str| Err(DataError::Schema(format!("synthetic config: {m}")));
        if self.strength.len() != n || self.synergy.len() != n * n || self.counter.len() != n * n {
            return bad("matrix dimensions disagree with n_heroes");
        }
        for i in 0..n {
            if self.synergy[i * n + i] != 0.0 {
                return bad("synergy diagonal must be zero");
            }
            for j in 0..n {
                if self.synergy[i * n + j] != self.synergy[j * n + i] {
                    return bad("synergy must be symmetric");
                }
                if self.counter[i * n + j] != -self.counter[j * n + i] {
                    return bad("counter must be antisymmetric");
                }
            }
        }
        if !(self.tau > 0.0) {
            return bad("tau must be positive");
        }
        if self.n_teams < 2 || self.player_skill.len() != self.n_teams * 5 {
            return bad("need at least two teams and five skills per team");
        }
        Ok(())
    }

    pub fn oracle(&self) -> SyntheticOracle {
        SyntheticOracle {
            n_heroes: self.n_heroes,
            strength: self.strength.clone(),
            synergy: Arc::new(self.synergy.clone()),
            counter: Arc::new(self.counter.clone()),
            tau: self.tau,
        }
    }
}

/// Closed-form win probability of a [`SyntheticConfig`].
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticOracle {
    n_heroes: usize,
    strength: Vec<f64>,
    synergy: Arc<Vec<f64>>,
    counter: Arc<Vec<f64>>,
    tau: f64,
}

impl SyntheticOracle {
    pub fn n_heroes(&self) -> usize {
        self.n_heroes
    }

    pub fn strength(&self, h: HeroId) -> f64 {
        self.strength[h.index()]
    }

    fn s(&self, a: usize, b: usize) -> f64 {
        self.synergy[a * self.n_heroes + b]
    }

    fn c(&self, a: usize, b: usize) -> f64 {
        self.counter[a * self.n_heroes + b]
    }

    /// Score of `team` facing `enemy`.
    pub fn lineup_score(&self, team: &[HeroId], enemy: &[HeroId]) -> f64 {
        let mut score = 0.0;
        for (i, a) in team.iter().enumerate() {
            score += self.strength[a.index()];
            for b in &team[i + 1..] {
                score += self.s(a.index(), b.index());
            }
            for e in enemy {
                score += self.c(a.index(), e.index());
            }
        }
        score
    }

    /// Any number of picks per side; partial lineups score what they have.
    pub fn blue_win_probability_for(&self, blue: &[HeroId], red: &[HeroId]) -> f64 {
        let diff = self.lineup_score(blue, red) - self.lineup_score(red, blue);
        sigmoid(diff / self.tau)
    }

    /// Change in `score(own) - score(enemy)` if `h` joins `own`.
    pub fn marginal_gain(&self, h: HeroId, own: &[HeroId], enemy: &[HeroId]) -> f64 {
        let mut g = self.strength[h.index()];
        for o in own {
            g += self.s(h.index(), o.index());
        }
        for e in enemy {
            g += 2.0 * self.c(h.index(), e.index());
        }
        g
    }

    fn apply_shift(&mut self, shift: &PatchShift) {
        self.strength[shift.hero.index()] += shift.strength_delta;
    }
}

impl RoundPredictor for SyntheticOracle {
    fn blue_win_probability(&self, state: &DraftState) -> f64 {
        let (mut blue, mut red) = (Vec::with_capacity(5), Vec::with_capacity(5));
        for (i, &s) in state.slots().iter().enumerate() {
            match s {
                1 => blue.push(HeroId::from(i)),
                2 => red.push(HeroId::from(i)),
                _ => {}
            }
        }
        self.blue_win_probability_for(&blue, &red)
    }
}

fn sigmoid(z: f64) -> f64 {
    crate::winrate::sigmoid(z)
}

/// Oracle probability that blue wins a full five-versus-five draft.
pub fn oracle_winrate(config: &SyntheticConfig, blue: &[HeroId], red: &[HeroId]) -> Result<f64> {
    if blue.len() != PICKS_PER_SIDE || red.len() != PICKS_PER_SIDE {
        return Err(DataError::PickCount {
            expected: PICKS_PER_SIDE,
            blue: blue.len(),
            red: red.len(),
        });
    }
    Ok(config.oracle().blue_win_probability_for(blue, red))
}

fn team_name(i: usize) -> String {
    if i < 26 {
        format!("Team {}", (b'A' + i as u8) as char)
    } else {
        format!("Team {i}")
    }
}

fn player_name(team: usize, slot: usize) -> String {
    let t = if team < 26 {
        ((b'A' + team as u8) as char).to_string()
    } else {
        format!("T{team}-")
    };
    format!("{t}{}", slot + 1)
}

/// Drafting agent: scores each legal hero by the oracle gain it brings (or
/// denies, for bans) and samples from a softmax over those scores.
fn agent_choice(
    oracle: &SyntheticOracle,
    state: &DraftState,
    legal: &[HeroId],
    temperature: f64,
    rng: &mut ChaCha8Rng,
) -> HeroId {
    let step = state.current_actor().expect("agent called on a live step");
    let own = state.picks(step.side);
    let enemy = state.picks(step.side.other());
    let values: Vec<f64> = legal
        .iter()
        .map(|&h| match step.kind {
            ActionKind::Pick => oracle.marginal_gain(h, &own, &enemy),
            // deny the hero the opponent would gain most from
            ActionKind::Ban => oracle.marginal_gain(h, &enemy, &own),
        })
        .collect();
    if !temperature.is_finite() {
        return legal[rng.random_range(0..legal.len())];
    }
    let t = temperature.max(1e-9);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = values.iter().map(|v| ((v - max) / t).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (h, w) in legal.iter().zip(&weights) {
        if u < *w {
            return *h;
        }
        u -= w;
    }
    *legal.last().expect("nonempty legal set")
}

fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> u32 {
    Poisson::new(mean.max(0.05)).expect("positive mean").sample(rng) as u32
}

/// Generates `n_matches` rounds grouped in best-of-N series between random
/// teams, together with the oracle that decided them. The oracle reflects
/// strengths before any configured patch shift.
pub fn generate_synthetic(config: &SyntheticConfig, n_matches: usize) -> Result<(MatchLogFile, SyntheticOracle)> {
    config.validate()?;
    let template = Arc::new(resolve_template(&config.template)?);
    let need = 2 * template.picks_per_side() * config.best_of + 2 * template.bans_per_side();
    if config.n_heroes < need {
        return Err(DataError::Schema(format!(
            "synthetic config: {} heroes cannot fill a best-of-{} series (need {need})",
            config.n_heroes, config.best_of
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let base = config.oracle();
    let mut live = base.clone();
    let mut patch = "P1".to_string();
    let heroes: Vec<HeroInfo> = (0..config.n_heroes)
        .map(|i| HeroInfo {
            id: HeroId::from(i),
            name: format!("Hero{i:03}"),
            role: ROLES[i % ROLES.len()].to_string(),
        })
        .collect();
    let teams: Vec<TeamInfo> = (0..config.n_teams)
        .map(|t| TeamInfo {
            name: team_name(t),
            players: (0..5).map(|k| player_name(t, k)).collect(),
        })
        .collect();
    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let mut matches = Vec::with_capacity(n_matches);
    let mut series_idx = 0;
    while matches.len() < n_matches {
        if let Some(shift) = &config.patch_shift {
            if shift.at_series == series_idx {
                live.apply_shift(shift);
                patch = shift.patch.clone();
            }
        }
        let a = rng.random_range(0..config.n_teams);
        let mut b = rng.random_range(0..config.n_teams - 1);
        if b >= a {
            b += 1;
        }
        // team a is `Ours` and plays blue in odd rounds
        let mut series = SeriesState::new(template.clone(), config.n_heroes, config.best_of, config.policy)?;
        let date = config.start_date + Days::new(series_idx as u64);
        let series_id = format!("S{series_idx:04}");
        while !series.is_terminal() && matches.len() < n_matches {
            let mut state = series.new_round();
            let mut steps = Vec::with_capacity(template.len());
            while !state.is_terminal() {
                let legal = series.legal_actions(&state)?;
                let step = state.current_actor()?;
                let hero = agent_choice(&live, &state, &legal, config.agent_temperature, &mut rng);
                state = series.apply_action(&state, hero)?;
                steps.push(StepRecord { side: step.side, kind: step.kind, hero });
            }
            let blue = state.picks(Side::Blue);
            let red = state.picks(Side::Red);
            let p_blue = live.blue_win_probability_for(&blue, &red);
            let winner = if rng.random::<f64>() < p_blue { Side::Blue } else { Side::Red };
            let team_idx = |side: Side| if series.team_of(side) == Team::Ours { a } else { b };
            let duration = rng.random_range(12.0..25.0_f64);
            let mut players = Vec::with_capacity(10);
            let mut team_stats = Vec::with_capacity(2);
            for side in [Side::Blue, Side::Red] {
                let t = team_idx(side);
                let won = (side == winner) as u8 as f64;
                let picks_in_order: Vec<HeroId> = steps
                    .iter()
                    .filter(|s| s.kind == ActionKind::Pick && s.side == side)
                    .map(|s| s.hero)
                    .collect();
                for (slot, &hero) in picks_in_order.iter().enumerate() {
                    let skill = config.player_skill[t * 5 + slot % 5];
                    players.push(PlayerRoundStats {
                        player: player_name(t, slot % 5),
                        team: team_name(t),
                        side,
                        hero,
                        role: ROLES[hero.index() % ROLES.len()].to_string(),
                        kills: poisson(&mut rng, 2.5 + 1.5 * won + 2.0 * skill),
                        deaths: poisson(&mut rng, 3.0 - 1.2 * won - skill),
                        assists: poisson(&mut rng, 4.5 + 2.5 * won + skill),
                        damage: (90_000.0 + 20_000.0 * won + 15_000.0 * skill
                            + 12_000.0 * noise.sample(&mut rng))
                        .max(5_000.0)
                        .round(),
                        damage_taken: (85_000.0 - 8_000.0 * won + 12_000.0 * noise.sample(&mut rng))
                            .max(5_000.0)
                            .round(),
                        gold: (duration * (700.0 + 90.0 * won + 60.0 * skill)
                            + 800.0 * noise.sample(&mut rng))
                        .max(1_000.0)
                        .round(),
                        minutes: duration,
                    });
                }
                team_stats.push(TeamRoundStats {
                    side,
                    tyrants: poisson(&mut rng, 0.8 + 1.0 * won),
                    dragons: poisson(&mut rng, 0.6 + 1.2 * won),
                    towers_destroyed: poisson(&mut rng, 2.0 + 4.5 * won).min(9),
                });
            }
            let round = series.round_index() + 1;
            matches.push(MatchRecord {
                match_id: format!("{series_id}-R{round}"),
                series_id: Some(series_id.clone()),
                round,
                best_of: config.best_of,
                date,
                patch: patch.clone(),
                template: config.template.clone(),
                blue_team: team_name(team_idx(Side::Blue)),
                red_team: team_name(team_idx(Side::Red)),
                steps,
                winner,
                duration_minutes: duration,
                players,
                team_stats,
            });
            series = series.advance_round(&state, series.team_of(winner))?;
        }
        series_idx += 1;
    }
    let mut file = MatchLogFile::new(heroes, teams, matches);
    file.global_policy = Some(config.policy);
    Ok((file, base))
}
