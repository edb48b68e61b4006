use std::sync::Arc;

use serde::{Deserialize, Serialize};

use draftcoach_core::data::resolve_template;
use draftcoach_core::draft::{
    ActionKind, DraftError, DraftState, GlobalBpPolicy, HeroId, SeriesState, Side, Team,
};

use crate::error::ApiError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct CreateSession {
    /// Built-in template name (`hok`, `lol`, `dota2`) or a step string.
    pub template: String,
    pub best_of: usize,
    /// Our team's name then the opponent's.
    pub teams: [String; 2],
    pub policy: GlobalBpPolicy,
    /// Side our team plays in round one; sides alternate afterwards.
    pub first_side: Side,
    /// Defaults to the loaded models' pool size.
    pub pool_size: Option<usize>,
}

impl Default for CreateSession {
    fn default() -> Self {
        CreateSession {
            template: "hok".into(),
            best_of: 3,
            teams: ["Ours".into(), "Theirs".into()],
            policy: GlobalBpPolicy::EitherTeam,
            first_side: Side::Blue,
            pool_size: None,
        }
    }
}

/// One live series being drafted.
#[derive(Clone, Debug)]
pub struct Session {
    pub id: String,
    pub teams: [String; 2],
    pub series: SeriesState,
    pub state: DraftState,
    /// Heroes committed in the current round, in order.
    pub history: Vec<HeroId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PendingStep {
    pub side: Side,
    pub team: Team,
    pub action: ActionKind,
}

/// What the client sees of a session.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: String,
    pub template: String,
    pub best_of: usize,
    pub pool_size: usize,
    pub teams: [String; 2],
    pub round: usize,
    pub our_side: Option<Side>,
    pub cursor: usize,
    pub next: Option<PendingStep>,
    pub history: Vec<HeroId>,
    pub bans: Vec<HeroId>,
    pub blue_picks: Vec<HeroId>,
    pub red_picks: Vec<HeroId>,
    /// Round winners so far.
    pub results: Vec<Team>,
    pub series_winner: Option<Team>,
    pub legal: Vec<HeroId>,
}

impl Session {
    pub fn create(id: String, req: &CreateSession, default_pool: usize) -> Result<Session, ApiError> {
        let template = Arc::new(resolve_template(&req.template)?);
        let first = req.first_side;
        let schedule = (0..req.best_of.max(1))
            .map(|r| if r % 2 == 0 { first } else { first.other() })
            .collect();
        let series = SeriesState::new(template, req.pool_size.unwrap_or(default_pool), req.best_of, req.policy)?
            .with_side_schedule(schedule)?;
        let state = series.new_round();
        Ok(Session { id, teams: req.teams.clone(), series, state, history: Vec::new() })
    }

    pub fn commit(&mut self, hero: HeroId) -> Result<(), ApiError> {
        if self.series.is_terminal() {
            return Err(DraftError::SeriesOver.into());
        }
        self.state = self.series.apply_action(&self.state, hero)?;
        self.history.push(hero);
        Ok(())
    }

    /// Removes the last committed step of the current round by replaying
    /// the rest of the history.
    pub fn undo(&mut self) -> Result<(), ApiError> {
        if self.history.pop().is_none() {
            return Err(ApiError::new(
                axum::http::StatusCode::CONFLICT,
                "empty_history",
                "nothing to undo in the current round",
            ));
        }
        self.state = replay(&self.series, &self.history)?;
        Ok(())
    }

    pub fn finish_round(&mut self, winner: Team) -> Result<(), ApiError> {
        self.series = self.series.advance_round(&self.state, winner)?;
        self.state = self.series.new_round();
        self.history.clear();
        Ok(())
    }

    pub fn summary(&self) -> SessionSummary {
        let s = &self.series;
        let next = if s.is_terminal() {
            None
        } else {
            self.state.current_actor().ok().map(|st| PendingStep {
                side: st.side,
                team: s.team_of(st.side),
                action: st.kind,
            })
        };
        let legal = if next.is_some() { s.legal_actions(&self.state).unwrap_or_default() } else { Vec::new() };
        SessionSummary {
            id: self.id.clone(),
            template: s.template().name().to_string(),
            best_of: s.best_of(),
            pool_size: s.pool_size(),
            teams: self.teams.clone(),
            round: s.round_index(),
            our_side: (!s.is_terminal()).then(|| s.side_of(Team::Ours)),
            cursor: self.state.cursor(),
            next,
            history: self.history.clone(),
            bans: self.state.bans(),
            blue_picks: self.state.picks(Side::Blue),
            red_picks: self.state.picks(Side::Red),
            results: s.results().to_vec(),
            series_winner: s.winner(),
            legal,
        }
    }
}

/// Applies `heroes` from a fresh round of `series`.
pub fn replay(series: &SeriesState, heroes: &[HeroId]) -> Result<DraftState, DraftError> {
    heroes.iter().try_fold(series.new_round(), |st, &h| series.apply_action(&st, h))
}
