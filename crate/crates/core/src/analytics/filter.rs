use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::data::MatchRecord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Condition {
    /// Date on or after.
    From(NaiveDate),
    /// Date strictly before.
    Before(NaiveDate),
    Patch(String),
    /// Rounds the team played on either side.
    Team(String),
}

impl Condition {
    pub fn accepts(&self, m: &MatchRecord) -> bool {
        match self {
            Condition::From(d) => m.date >= *d,
            Condition::Before(d) => m.date < *d,
            Condition::Patch(p) => &m.patch == p,
            Condition::Team(t) => m.side_of(t).is_some(),
        }
    }
}

/// Conjunction of conditions. The empty filter keeps every round.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchFilter {
    pub conditions: Vec<Condition>,
}

impl MatchFilter {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn with(mut self, c: Condition) -> Self {
        self.conditions.push(c);
        self
    }

    pub fn from(self, d: NaiveDate) -> Self {
        self.with(Condition::From(d))
    }

    pub fn before(self, d: NaiveDate) -> Self {
        self.with(Condition::Before(d))
    }

    pub fn patch(self, p: impl Into<String>) -> Self {
        self.with(Condition::Patch(p.into()))
    }

    pub fn team(self, t: impl Into<String>) -> Self {
        self.with(Condition::Team(t.into()))
    }

    pub fn and(mut self, other: &MatchFilter) -> Self {
        self.conditions.extend(other.conditions.iter().cloned());
        self
    }

    pub fn accepts(&self, m: &MatchRecord) -> bool {
        self.conditions.iter().all(|c| c.accepts(m))
    }

    pub fn apply<'a>(&'a self, records: &'a [MatchRecord]) -> impl Iterator<Item = &'a MatchRecord> + 'a {
        records.iter().filter(move |m| self.accepts(m))
    }
}
