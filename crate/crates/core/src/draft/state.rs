use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ActionKind, DraftError, DraftTemplate, HeroId, Result, Side, Step};

/// Slot value of an untouched hero.
pub const SLOT_FREE: i8 = 0;
/// Slot value of a banned hero.
pub const SLOT_BANNED: i8 = -1;

/// Ban/pick state of a single round.
///
/// `slots[h]` is 0 while hero `h` is untouched, -1 once banned and the side
/// number (1 blue, 2 red) once picked. `history` keeps the heroes in the order
/// the steps were taken, so a state can always be rebuilt by replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DraftState {
    slots: Vec<i8>,
    history: Vec<HeroId>,
    template: Arc<DraftTemplate>,
}

impl DraftState {
    pub fn new(template: Arc<DraftTemplate>, pool_size: usize) -> Self {
        DraftState {
            slots: vec![SLOT_FREE; pool_size],
            history: Vec::with_capacity(template.len()),
            template,
        }
    }

    pub fn slots(&self) -> &[i8] {
        &self.slots
    }

    pub fn slot(&self, hero: HeroId) -> i8 {
        self.slots[hero.index()]
    }

    pub fn pool_size(&self) -> usize {
        self.slots.len()
    }

    /// Index of the next step in the template.
    pub fn cursor(&self) -> usize {
        self.history.len()
    }

    pub fn history(&self) -> &[HeroId] {
        &self.history
    }

    pub fn template(&self) -> &Arc<DraftTemplate> {
        &self.template
    }

    pub fn is_terminal(&self) -> bool {
        self.cursor() >= self.template.len()
    }

    pub fn remaining_steps(&self) -> usize {
        self.template.len().saturating_sub(self.cursor())
    }

    /// Side and action of the pending step.
    pub fn current_actor(&self) -> Result<Step> {
        self.template.step(self.cursor()).ok_or(DraftError::Terminal)
    }

    pub fn picks(&self, side: Side) -> Vec<HeroId> {
        let v = side.number() as i8;
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == v)
            .map(|(i, _)| HeroId::from(i))
            .collect()
    }

    pub fn bans(&self) -> Vec<HeroId> {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == SLOT_BANNED)
            .map(|(i, _)| HeroId::from(i))
            .collect()
    }

    pub fn pick_count(&self) -> usize {
        self.slots.iter().filter(|&&s| s > 0).count()
    }

    /// Writes the pending step without any legality check. Callers must have
    /// validated `hero` against the series rules.
    pub(crate) fn push_unchecked(&mut self, hero: HeroId) {
        let step = self.template.steps()[self.cursor()];
        self.slots[hero.index()] = match step.kind {
            ActionKind::Ban => SLOT_BANNED,
            ActionKind::Pick => step.side.number() as i8,
        };
        self.history.push(hero);
    }

    /// Marks `hero` as picked by `side` without advancing the cursor. Only
    /// for scoring hypothetical lineups.
    pub(crate) fn with_hypothetical_pick(&self, hero: HeroId, side: Side) -> DraftState {
        let mut next = self.clone();
        next.slots[hero.index()] = side.number() as i8;
        next
    }
}
