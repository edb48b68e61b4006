use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    ActionKind, DraftError, DraftState, DraftTemplate, HeroId, Result, Rule, Side, Team,
};

/// Scope of the global ban/pick rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalBpPolicy {
    /// A team may not pick heroes it picked itself in earlier rounds.
    SelfOnly,
    /// Neither team may pick a hero picked by either team in earlier rounds.
    #[default]
    EitherTeam,
}

/// Best-of-N context shared by all rounds of a series.
///
/// Teams are named from the point of view of the coach using the tool
/// (`Team::Ours` / `Team::Theirs`); the side each team plays in a round comes
/// from the side schedule, which alternates by default.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesState {
    template: Arc<DraftTemplate>,
    pool_size: usize,
    best_of: usize,
    policy: GlobalBpPolicy,
    /// Side played by `Team::Ours` in each round.
    side_schedule: Vec<Side>,
    round_index: usize,
    /// Previous-selection masks indexed by `Team::index`.
    previous: [Vec<bool>; 2],
    wins: [usize; 2],
    results: Vec<Team>,
}

impl SeriesState {
    /// A fresh series where our team plays blue in round one and sides
    /// alternate afterwards.
    pub fn new(
        template: Arc<DraftTemplate>,
        pool_size: usize,
        best_of: usize,
        policy: GlobalBpPolicy,
    ) -> Result<Self> {
        if best_of == 0 || best_of % 2 == 0 {
            return Err(DraftError::InvalidSeries(format!(
                "best-of must be a positive odd number, got {best_of}"
            )));
        }
        if pool_size < template.heroes_per_round() {
            return Err(DraftError::InvalidSeries(format!(
                "pool of {pool_size} heroes cannot fill a {}-step round",
                template.heroes_per_round()
            )));
        }
        if pool_size > u16::MAX as usize {
            return Err(DraftError::InvalidSeries("pool too large".into()));
        }
        let side_schedule = (0..best_of)
            .map(|r| if r % 2 == 0 { Side::Blue } else { Side::Red })
            .collect();
        Ok(SeriesState {
            template,
            pool_size,
            best_of,
            policy,
            side_schedule,
            round_index: 0,
            previous: [vec![false; pool_size], vec![false; pool_size]],
            wins: [0, 0],
            results: Vec::new(),
        })
    }

    /// Replaces the side schedule. `schedule[r]` is the side our team plays in
    /// round `r`; it must cover every round of the series.
    pub fn with_side_schedule(mut self, schedule: Vec<Side>) -> Result<Self> {
        if schedule.len() < self.best_of {
            return Err(DraftError::InvalidSeries(format!(
                "side schedule covers {} rounds, series needs {}",
                schedule.len(),
                self.best_of
            )));
        }
        self.side_schedule = schedule;
        Ok(self)
    }

    /// The same series seen from the other team.
    pub fn swapped(&self) -> SeriesState {
        let mut s = self.clone();
        s.side_schedule = self.side_schedule.iter().map(|x| x.other()).collect();
        s.previous.swap(0, 1);
        s.wins.swap(0, 1);
        s.results = self.results.iter().map(|t| t.other()).collect();
        s
    }

    pub fn template(&self) -> &Arc<DraftTemplate> {
        &self.template
    }

    pub fn pool_size(&self) -> usize {
        self.pool_size
    }

    pub fn best_of(&self) -> usize {
        self.best_of
    }

    pub fn policy(&self) -> GlobalBpPolicy {
        self.policy
    }

    pub fn side_schedule(&self) -> &[Side] {
        &self.side_schedule
    }

    pub fn round_index(&self) -> usize {
        self.round_index
    }

    pub fn wins(&self, team: Team) -> usize {
        self.wins[team.index()]
    }

    pub fn results(&self) -> &[Team] {
        &self.results
    }

    /// Wins needed to take the series, `(N + 1) / 2`.
    pub fn wins_needed(&self) -> usize {
        (self.best_of + 1) / 2
    }

    pub fn is_terminal(&self) -> bool {
        self.wins.iter().any(|&w| w >= self.wins_needed()) || self.round_index >= self.best_of
    }

    pub fn winner(&self) -> Option<Team> {
        [Team::Ours, Team::Theirs]
            .into_iter()
            .find(|t| self.wins[t.index()] >= self.wins_needed())
    }

    /// Rounds still to be played including the current one, counting up to
    /// `N` regardless of whether the series could end early.
    pub fn remaining_rounds(&self) -> usize {
        if self.is_terminal() {
            0
        } else {
            self.best_of - self.round_index
        }
    }

    /// Side our team plays in the current round.
    pub fn side_of(&self, team: Team) -> Side {
        let ours = self.side_schedule[self.round_index.min(self.side_schedule.len() - 1)];
        match team {
            Team::Ours => ours,
            Team::Theirs => ours.other(),
        }
    }

    pub fn team_of(&self, side: Side) -> Team {
        if self.side_of(Team::Ours) == side {
            Team::Ours
        } else {
            Team::Theirs
        }
    }

    /// Previous-selection mask of a team: `true` bars the hero from that
    /// team's picks.
    pub fn previous_mask(&self, team: Team) -> &[bool] {
        &self.previous[team.index()]
    }

    pub fn is_barred(&self, team: Team, hero: HeroId) -> bool {
        self.previous[team.index()][hero.index()]
    }

    /// Empty draft for the current round.
    pub fn new_round(&self) -> DraftState {
        DraftState::new(self.template.clone(), self.pool_size)
    }

    /// Team that acts at the pending step of `state`.
    pub fn acting_team(&self, state: &DraftState) -> Result<Team> {
        Ok(self.team_of(state.current_actor()?.side))
    }

    /// Legality of every hero for the pending step, as a mask over the pool.
    pub fn legal_mask(&self, state: &DraftState) -> Result<Vec<bool>> {
        if self.is_terminal() {
            return Err(DraftError::SeriesOver);
        }
        let step = state.current_actor()?;
        let mut mask: Vec<bool> = state.slots().iter().map(|&s| s == 0).collect();
        if step.kind == ActionKind::Pick {
            let barred = &self.previous[self.team_of(step.side).index()];
            for (m, &b) in mask.iter_mut().zip(barred) {
                *m &= !b;
            }
        }
        Ok(mask)
    }

    /// Heroes that may be taken at the pending step, ascending by id.
    pub fn legal_actions(&self, state: &DraftState) -> Result<Vec<HeroId>> {
        Ok(self
            .legal_mask(state)?
            .iter()
            .enumerate()
            .filter(|(_, &ok)| ok)
            .map(|(i, _)| HeroId::from(i))
            .collect())
    }

    /// Checks `hero` against every rule for the pending step.
    pub fn check_action(&self, state: &DraftState, hero: HeroId) -> Result<()> {
        let violation = |rule| DraftError::RuleViolation { rule, hero };
        if self.is_terminal() || state.is_terminal() {
            return Err(violation(Rule::BadPhase));
        }
        if hero.index() >= state.pool_size() {
            return Err(violation(Rule::OutOfRange));
        }
        if state.slot(hero) != 0 {
            return Err(violation(Rule::Duplicate));
        }
        let step = state.current_actor()?;
        if step.kind == ActionKind::Pick && self.is_barred(self.team_of(step.side), hero) {
            return Err(violation(Rule::PreviousRound));
        }
        Ok(())
    }

    /// Takes the pending step with `hero`, returning the new state. The input
    /// state is left untouched.
    pub fn apply_action(&self, state: &DraftState, hero: HeroId) -> Result<DraftState> {
        self.check_action(state, hero)?;
        let mut next = state.clone();
        next.push_unchecked(hero);
        Ok(next)
    }

    /// Closes the current round: records the winner, extends the
    /// previous-selection masks and moves to the next round.
    pub fn advance_round(&self, final_state: &DraftState, winner: Team) -> Result<SeriesState> {
        if self.is_terminal() {
            return Err(DraftError::SeriesOver);
        }
        if !final_state.is_terminal() {
            return Err(DraftError::NotTerminal {
                done: final_state.cursor(),
                total: final_state.template().len(),
            });
        }
        let mut next = self.clone();
        next.wins[winner.index()] += 1;
        next.results.push(winner);
        next.close_round(final_state);
        Ok(next)
    }

    /// Mask update and round increment without a recorded result. Used by
    /// simulations that score a round by probability instead of an outcome.
    pub(crate) fn close_round(&mut self, final_state: &DraftState) {
        for (h, &s) in final_state.slots().iter().enumerate() {
            if s <= 0 {
                continue;
            }
            let team = self.team_of(Side::from_number(s as u8).expect("pick slot"));
            match self.policy {
                GlobalBpPolicy::SelfOnly => self.previous[team.index()][h] = true,
                GlobalBpPolicy::EitherTeam => {
                    self.previous[0][h] = true;
                    self.previous[1][h] = true;
                }
            }
        }
        self.round_index += 1;
    }

    /// Writes the legal mask of a live step into `buf` and returns the number
    /// of legal heroes. Skips the series-over check.
    pub(crate) fn fill_legal_mask(&self, state: &DraftState, buf: &mut Vec<bool>) -> usize {
        buf.clear();
        let Ok(step) = state.current_actor() else {
            buf.resize(state.pool_size(), false);
            return 0;
        };
        let barred = &self.previous[self.team_of(step.side).index()];
        let pick = step.kind == ActionKind::Pick;
        let mut n = 0;
        for (&s, &b) in state.slots().iter().zip(barred) {
            let ok = s == 0 && !(pick && b);
            n += ok as usize;
            buf.push(ok);
        }
        n
    }
}
