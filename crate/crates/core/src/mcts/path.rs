use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::draft::{ActionKind, DraftError, DraftState, HeroId, SeriesState, Side, Team};
use crate::hash::mix_seed;
use crate::markov::top_k_of;

use super::rollout::{our_probability, simulate, Position};
use super::tree::recommend;
use super::{MctsConfig, MctsError, Models, Result, RewardMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepSource {
    Recommended,
    Predicted,
    Custom,
}

/// A candidate at one path step: the search's mean reward on our turns, the
/// predicted probability on the opponent's.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Alternative {
    pub hero: HeroId,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathStep {
    pub cursor: usize,
    pub actor: Team,
    pub side: Side,
    pub action: ActionKind,
    pub source: StepSource,
    pub hero: HeroId,
    /// Top three candidates, best first.
    pub alternatives: Vec<Alternative>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DraftPath {
    pub steps: Vec<PathStep>,
}

impl DraftPath {
    pub fn heroes(&self) -> Vec<HeroId> {
        self.steps.iter().map(|s| s.hero).collect()
    }
}

const ALTERNATIVES: usize = 3;

/// Search seed for a given step, so that rebuilding a path from any of its
/// states repeats the same searches downstream.
fn step_seed(config: &MctsConfig, series: &SeriesState, state: &DraftState) -> u64 {
    mix_seed(mix_seed(config.seed, series.round_index() as u64), state.cursor() as u64)
}

/// Extends `state` by `depth` steps: our turns take the search's choice,
/// the opponent's take the most likely prediction. `overrides` replaces the
/// hero at the given path index (0 = the pending step) with a custom one.
pub fn build_path(
    series: &SeriesState,
    state: &DraftState,
    depth: usize,
    models: Models<'_>,
    config: &MctsConfig,
    overrides: &[(usize, HeroId)],
) -> Result<DraftPath> {
    let remaining = state.remaining_steps();
    if depth > remaining {
        return Err(MctsError::DepthTooLarge { depth, remaining });
    }
    if depth > 0 && series.is_terminal() {
        return Err(DraftError::SeriesOver.into());
    }
    let mut cur = state.clone();
    let mut path = DraftPath::default();
    for i in 0..depth {
        let step = cur.current_actor()?;
        let actor = series.team_of(step.side);
        let (default, alternatives, source) = match actor {
            Team::Ours => {
                let cfg = MctsConfig { seed: step_seed(config, series, &cur), ..config.clone() };
                let rec = recommend(series, &cur, models, &cfg)?;
                let alts = rec
                    .ranked
                    .iter()
                    .take(ALTERNATIVES)
                    .map(|r| Alternative { hero: r.hero, score: r.score })
                    .collect();
                (rec.chosen, alts, StepSource::Recommended)
            }
            Team::Theirs => {
                let mask = series.legal_mask(&cur)?;
                let n = mask.iter().filter(|&&m| m).count();
                if n == 0 {
                    return Err(MctsError::NoLegalAction);
                }
                let top = match models.markov {
                    Some(m) => m.top_k(&cur, &mask, ALTERNATIVES)?,
                    None => top_k_of(&vec![1.0 / n as f64; mask.len()], &mask, ALTERNATIVES),
                };
                let alts: Vec<Alternative> =
                    top.iter().map(|&(hero, score)| Alternative { hero, score }).collect();
                (alts[0].hero, alts, StepSource::Predicted)
            }
        };
        let (hero, source) = match overrides.iter().find(|(k, _)| *k == i) {
            Some(&(_, h)) => (h, StepSource::Custom),
            None => (default, source),
        };
        cur = series.apply_action(&cur, hero)?;
        path.steps.push(PathStep {
            cursor: cur.cursor() - 1,
            actor,
            side: step.side,
            action: step.kind,
            source,
            hero,
            alternatives,
        });
    }
    Ok(path)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DraftComparison {
    /// Our probability of winning the drafted round.
    pub round_probability: f64,
    /// Mean expected wins over the rounds after this one.
    pub future_expected_wins: f64,
    pub expected_wins: f64,
    pub below_half: bool,
}

/// Scores finished drafts of the current round: the round's win probability
/// plus the expected wins of `samples` simulated futures. Every draft uses
/// the same random stream.
pub fn compare_drafts(
    series: &SeriesState,
    drafts: &[DraftState],
    models: Models<'_>,
    config: &MctsConfig,
    samples: usize,
) -> Result<Vec<DraftComparison>> {
    if series.is_terminal() {
        return Err(DraftError::SeriesOver.into());
    }
    let mut mask = Vec::with_capacity(series.pool_size());
    drafts
        .iter()
        .enumerate()
        .map(|(index, d)| {
            if !d.is_terminal() {
                return Err(MctsError::NotTerminal { index });
            }
            let p = our_probability(series, d, &models);
            let mut pos = Position::new(series.clone(), d.clone(), &models);
            pos.round_ps.clear();
            let future = if pos.is_over() {
                0.0
            } else {
                if samples == 0 {
                    return Err(MctsError::InvalidConfig("samples must be >= 1".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                let total: f64 = (0..samples)
                    .map(|_| {
                        simulate(&pos, &models, config.rollout_policy, RewardMode::ExpectedWins, &mut rng, &mut mask)
                    })
                    .sum();
                total / samples as f64
            };
            Ok(DraftComparison {
                round_probability: p,
                future_expected_wins: future,
                expected_wins: p + future,
                below_half: p < 0.5,
            })
        })
        .collect()
}
