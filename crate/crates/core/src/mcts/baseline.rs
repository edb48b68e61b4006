use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::draft::{
    ActionKind, DraftState, DraftTemplate, GlobalBpPolicy, HeroId, SeriesState, Side, Team,
};
use crate::hash::mix_seed;
use crate::winrate::RoundPredictor;

use super::rollout::our_probability;
use super::tree::recommend;
use super::{MctsConfig, MctsError, Models, Result};

fn our_turn_legal(series: &SeriesState, state: &DraftState) -> Result<Vec<HeroId>> {
    let actor = series.acting_team(state)?;
    if actor != Team::Ours {
        return Err(MctsError::WrongTurn { expected: Team::Ours, actual: actor });
    }
    let legal = series.legal_actions(state)?;
    if legal.is_empty() {
        return Err(MctsError::NoLegalAction);
    }
    Ok(legal)
}

/// Uniformly random legal hero.
pub fn baseline_random<R: Rng + ?Sized>(
    series: &SeriesState,
    state: &DraftState,
    rng: &mut R,
) -> Result<HeroId> {
    let legal = our_turn_legal(series, state)?;
    Ok(*legal.choose(rng).expect("nonempty"))
}

/// One-step greedy on the current round. A pick takes the hero that
/// maximises our win probability once added to our lineup; a ban removes the
/// hero that would most raise the opponent's win probability if they picked
/// it next. Ties go to the lower id.
pub fn baseline_hwr(
    series: &SeriesState,
    state: &DraftState,
    win: &dyn RoundPredictor,
) -> Result<HeroId> {
    let legal = our_turn_legal(series, state)?;
    let step = state.current_actor()?;
    let models = Models::new(win, None);
    let score = |h: HeroId| -> f64 {
        match step.kind {
            ActionKind::Pick => {
                our_probability(series, &state.with_hypothetical_pick(h, step.side), &models)
            }
            ActionKind::Ban => {
                if series.is_barred(Team::Theirs, h) {
                    // they could not pick it anyway
                    -our_probability(series, state, &models)
                } else {
                    let theirs = state.with_hypothetical_pick(h, step.side.other());
                    -our_probability(series, &theirs, &models)
                }
            }
        }
    };
    let mut best = (f64::NEG_INFINITY, legal[0]);
    for &h in &legal {
        let s = score(h);
        if s > best.0 {
            best = (s, h);
        }
    }
    Ok(best.1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DraftPolicy {
    Random,
    HighestWinRate,
    Mcts(MctsConfig),
}

impl DraftPolicy {
    fn choose(
        &self,
        series: &SeriesState,
        state: &DraftState,
        models: Models<'_>,
        rng: &mut ChaCha8Rng,
        trial_seed: u64,
    ) -> Result<HeroId> {
        match self {
            DraftPolicy::Random => baseline_random(series, state, rng),
            DraftPolicy::HighestWinRate => baseline_hwr(series, state, models.win),
            DraftPolicy::Mcts(cfg) => {
                let seed = mix_seed(mix_seed(trial_seed, series.round_index() as u64), state.cursor() as u64);
                let cfg = MctsConfig { seed, ..cfg.clone() };
                Ok(recommend(series, state, models, &cfg)?.chosen)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSetup {
    pub template: Arc<DraftTemplate>,
    pub pool_size: usize,
    pub best_of: usize,
    pub policy: GlobalBpPolicy,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub trials: usize,
    pub wins: usize,
    /// Share of series won by policy A.
    pub win_rate: f64,
    /// Half width of the normal-approximation 95% interval.
    pub ci_half_width: f64,
    pub rounds_played: usize,
}

impl ExperimentResult {
    pub fn ci(&self) -> (f64, f64) {
        (self.win_rate - self.ci_half_width, self.win_rate + self.ci_half_width)
    }

    /// True when the interval lies entirely above one half.
    pub fn a_significantly_better(&self) -> bool {
        self.ci().0 > 0.5
    }
}

/// Plays `trials` series with policy A drafting for our team and policy B
/// for the opponent. Round winners are drawn from the win model. Even trials
/// start A on blue, odd trials on red, and sides alternate every round.
pub fn run_series_experiment(
    a: &DraftPolicy,
    b: &DraftPolicy,
    setup: &ExperimentSetup,
    models: Models<'_>,
    trials: usize,
    seed: u64,
) -> Result<ExperimentResult> {
    if trials == 0 {
        return Err(MctsError::InvalidConfig("trials must be >= 1".into()));
    }
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| play_series(a, b, setup, models, t, mix_seed(seed, t as u64)))
        .collect::<Result<Vec<(bool, usize)>>>()?;
    let wins = outcomes.iter().filter(|o| o.0).count();
    let rounds_played = outcomes.iter().map(|o| o.1).sum();
    let p = wins as f64 / trials as f64;
    Ok(ExperimentResult {
        trials,
        wins,
        win_rate: p,
        ci_half_width: 1.96 * (p * (1.0 - p) / trials as f64).sqrt(),
        rounds_played,
    })
}

fn play_series(
    a: &DraftPolicy,
    b: &DraftPolicy,
    setup: &ExperimentSetup,
    models: Models<'_>,
    trial: usize,
    trial_seed: u64,
) -> Result<(bool, usize)> {
    let first = if trial % 2 == 0 { Side::Blue } else { Side::Red };
    let schedule = (0..setup.best_of)
        .map(|r| if r % 2 == 0 { first } else { first.other() })
        .collect();
    let mut series = SeriesState::new(setup.template.clone(), setup.pool_size, setup.best_of, setup.policy)?
        .with_side_schedule(schedule)?;
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let mut rounds = 0;
    while !series.is_terminal() {
        let mut d = series.new_round();
        let theirs_view = series.swapped();
        while !d.is_terminal() {
            let hero = match series.acting_team(&d)? {
                Team::Ours => a.choose(&series, &d, models, &mut rng, trial_seed)?,
                Team::Theirs => b.choose(&theirs_view, &d, models, &mut rng, !trial_seed)?,
            };
            d = series.apply_action(&d, hero)?;
        }
        let p_blue = models.win.blue_win_probability(&d);
        let winner = if rng.random::<f64>() < p_blue { Side::Blue } else { Side::Red };
        series = series.advance_round(&d, series.team_of(winner))?;
        rounds += 1;
    }
    Ok((series.winner() == Some(Team::Ours), rounds))
}
