#![allow(dead_code)]

pub mod recount;

use std::sync::Arc;

use draftcoach_core::data::{SyntheticConfig, SyntheticOracle};
use draftcoach_core::draft::{DraftState, DraftTemplate, GlobalBpPolicy, HeroId, SeriesState, Side, Team};
use draftcoach_core::winrate::RoundPredictor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Payoff table for one-pick-each games: `table[blue][red]` is blue's win
/// probability. Partial drafts score 0.5.
pub struct PairTable {
    pub n: usize,
    pub table: Vec<f64>,
}

impl RoundPredictor for PairTable {
    fn blue_win_probability(&self, state: &DraftState) -> f64 {
        match (state.picks(Side::Blue).as_slice(), state.picks(Side::Red).as_slice()) {
            ([b], [r]) => self.table[b.index() * self.n + r.index()],
            _ => 0.5,
        }
    }
}

pub struct SmallGame {
    pub series: SeriesState,
    pub predictor: PairTable,
}

/// Bo1 game on 4 to 6 heroes with `p1-p2` or `b1-b2-p1-p2` and random
/// payoffs.
pub fn random_small_game(rng: &mut ChaCha8Rng) -> SmallGame {
    let n = rng.random_range(4..=6);
    let text = if rng.random_bool(0.5) { "p1-p2" } else { "b1-b2-p1-p2" };
    let template = Arc::new(DraftTemplate::parse_custom(text, text).unwrap());
    let series = SeriesState::new(template, n, 1, GlobalBpPolicy::EitherTeam).unwrap();
    let table = (0..n * n).map(|_| rng.random::<f64>()).collect();
    SmallGame { series, predictor: PairTable { n, table } }
}

pub fn small_games(count: usize, seed: u64) -> Vec<SmallGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_small_game(&mut rng)).collect()
}

/// Bo1 game on 4 to 6 heroes, `p1-p2` or `b1-b2-p1-p2`, scored by a random
/// synthetic-league oracle.
pub struct OracleGame {
    pub series: SeriesState,
    pub oracle: SyntheticOracle,
}

pub fn oracle_small_games(count: usize, seed: u64) -> Vec<OracleGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(4..=6);
            let text = if rng.random_bool(0.5) { "p1-p2" } else { "b1-b2-p1-p2" };
            let template = Arc::new(DraftTemplate::parse_custom(text, text).unwrap());
            let series = SeriesState::new(template, n, 1, GlobalBpPolicy::EitherTeam).unwrap();
            let oracle = SyntheticConfig::random(n, 1.0, 0.5, 0.5, rng.random()).oracle();
            OracleGame { series, oracle }
        })
        .collect()
}

/// Exact value of the rest of the round for our team: we maximise our win
/// probability, the opponent minimises it. Bo1 only.
pub fn minimax(series: &SeriesState, state: &DraftState, predictor: &dyn RoundPredictor) -> f64 {
    if state.is_terminal() {
        let p = predictor.blue_win_probability(state);
        return if series.side_of(Team::Ours) == Side::Blue { p } else { 1.0 - p };
    }
    let values = series
        .legal_actions(state)
        .unwrap()
        .into_iter()
        .map(|h| minimax(series, &series.apply_action(state, h).unwrap(), predictor));
    match series.acting_team(state).unwrap() {
        Team::Ours => values.fold(f64::NEG_INFINITY, f64::max),
        Team::Theirs => values.fold(f64::INFINITY, f64::min),
    }
}

/// Our actions achieving the minimax value at `state`.
pub fn minimax_actions(series: &SeriesState, state: &DraftState, predictor: &dyn RoundPredictor) -> Vec<HeroId> {
    let scored: Vec<(HeroId, f64)> = series
        .legal_actions(state)
        .unwrap()
        .into_iter()
        .map(|h| (h, minimax(series, &series.apply_action(state, h).unwrap(), predictor)))
        .collect();
    let best = scored.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    scored.into_iter().filter(|s| (s.1 - best).abs() < 1e-12).map(|s| s.0).collect()
}
