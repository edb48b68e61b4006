use rand::Rng;

use crate::draft::{DraftState, HeroId, SeriesState, Side, Team};

use super::{MctsConfig, Models, Result, RewardMode, RolloutPolicy};

/// A point in the search: the series, the round being drafted and our win
/// probability for every round finished since the search root. Finished
/// rounds are closed without a winner, so the series' win tally stays at its
/// root value and every round up to `N` is played out.
#[derive(Clone, Debug)]
pub(crate) struct Position {
    pub series: SeriesState,
    pub draft: DraftState,
    pub round_ps: Vec<f64>,
}

impl Position {
    pub fn new(series: SeriesState, draft: DraftState, models: &Models) -> Self {
        let mut pos = Position { series, draft, round_ps: Vec::new() };
        if pos.draft.is_terminal() && !pos.is_over() {
            pos.finish_round(models);
        }
        pos
    }

    /// True once every round up to `N` has been drafted.
    pub fn is_over(&self) -> bool {
        self.series.round_index() >= self.series.best_of()
    }

    pub fn actor(&self) -> Option<Team> {
        if self.is_over() {
            return None;
        }
        self.series.acting_team(&self.draft).ok()
    }

    /// Applies an action already known to be legal.
    pub fn play(&mut self, hero: HeroId, models: &Models) {
        self.draft.push_unchecked(hero);
        if self.draft.is_terminal() {
            self.finish_round(models);
        }
    }

    fn finish_round(&mut self, models: &Models) {
        let p = our_probability(&self.series, &self.draft, models);
        self.close_with(p);
    }

    fn close_with(&mut self, p: f64) {
        self.round_ps.push(p);
        self.series.close_round(&self.draft);
        if !self.is_over() {
            self.draft = self.series.new_round();
        }
    }
}

/// Our team's probability of winning the round drafted in `state`.
pub(crate) fn our_probability(series: &SeriesState, state: &DraftState, models: &Models) -> f64 {
    let p = models.win.blue_win_probability(state).clamp(0.0, 1.0);
    match series.side_of(Team::Ours) {
        Side::Blue => p,
        Side::Red => 1.0 - p,
    }
}

/// Probability of at least `need` successes among independent rounds won
/// with the given probabilities.
pub fn series_win_probability(round_ps: &[f64], need: usize) -> f64 {
    if need == 0 {
        return 1.0;
    }
    if need > round_ps.len() {
        return 0.0;
    }
    // dist[k] = P(exactly k wins so far), capped at `need`
    let mut dist = vec![0.0; need + 1];
    dist[0] = 1.0;
    for &p in round_ps {
        for k in (0..=need).rev() {
            let stay = if k == need { dist[k] } else { dist[k] * (1.0 - p) };
            let come = if k > 0 { dist[k - 1] * p } else { 0.0 };
            dist[k] = stay + come;
        }
    }
    dist[need]
}

pub(crate) fn reward<R: Rng + ?Sized>(pos: &Position, mode: RewardMode, rng: &mut R) -> f64 {
    match mode {
        RewardMode::ExpectedWins => pos.round_ps.iter().sum(),
        RewardMode::BernoulliSampled => pos
            .round_ps
            .iter()
            .map(|&p| (rng.random::<f64>() < p) as u8 as f64)
            .sum(),
        RewardMode::SeriesWinProbability => {
            let s = &pos.series;
            let need = s.wins_needed().saturating_sub(s.wins(Team::Ours));
            series_win_probability(&pos.round_ps, need)
        }
    }
}

/// Plays `pos` out to the end of the series with the rollout policy and
/// scores it.
pub(crate) fn simulate<R: Rng + ?Sized>(
    pos: &Position,
    models: &Models,
    policy: RolloutPolicy,
    mode: RewardMode,
    rng: &mut R,
    mask: &mut Vec<bool>,
) -> f64 {
    let mut pos = pos.clone();
    while !pos.is_over() {
        let n_legal = pos.series.fill_legal_mask(&pos.draft, mask);
        if n_legal == 0 {
            log::warn!(
                "draft deadlocked at round {} step {}; scoring the round as lost",
                pos.series.round_index() + 1,
                pos.draft.cursor()
            );
            pos.close_with(0.0);
            continue;
        }
        let hero = match (policy, models.markov) {
            (RolloutPolicy::MarkovSampled, Some(m)) => m.sample(&pos.draft, mask, rng),
            _ => nth_legal(mask, rng.random_range(0..n_legal)),
        }
        .expect("nonempty mask");
        pos.play(hero, models);
    }
    reward(&pos, mode, rng)
}

fn nth_legal(mask: &[bool], k: usize) -> Option<HeroId> {
    mask.iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .nth(k)
        .map(|(i, _)| HeroId::from(i))
}

/// One rollout from `state` (the round in progress) to the end of the series,
/// scored from our team's perspective. A decided series scores 0.
pub fn rollout<R: Rng + ?Sized>(
    series: &SeriesState,
    state: &DraftState,
    models: &Models,
    config: &MctsConfig,
    rng: &mut R,
) -> Result<f64> {
    if series.is_terminal() {
        return Ok(0.0);
    }
    let pos = Position::new(series.clone(), state.clone(), models);
    let mut mask = Vec::with_capacity(series.pool_size());
    Ok(simulate(&pos, models, config.rollout_policy, config.reward_mode, rng, &mut mask))
}
