use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{DataError, Result};
use crate::draft::{
    ActionKind, DraftError, DraftState, DraftTemplate, GlobalBpPolicy, HeroId, SeriesState, Side,
};
use crate::markov::DraftSequence;
use crate::winrate::Dataset;

pub const FORMAT_NAME: &str = "draftcoach-matchlog";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeroInfo {
    pub id: HeroId,
    pub name: String,
    pub role: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamInfo {
    pub name: String,
    pub players: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub side: Side,
    pub kind: ActionKind,
    pub hero: HeroId,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerRoundStats {
    pub player: String,
    pub team: String,
    pub side: Side,
    pub hero: HeroId,
    pub role: String,
    pub kills: u32,
    pub deaths: u32,
    pub assists: u32,
    pub damage: f64,
    pub damage_taken: f64,
    pub gold: f64,
    pub minutes: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamRoundStats {
    pub side: Side,
    pub tyrants: u32,
    pub dragons: u32,
    pub towers_destroyed: u32,
}

/// One played round (one draft, one winner).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub match_id: String,
    /// Rounds sharing a series id are replayed together under the file's
    /// global ban/pick policy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_id: Option<String>,
    /// 1-based round number within the series.
    #[serde(default = "one")]
    pub round: usize,
    #[serde(default = "one")]
    pub best_of: usize,
    pub date: NaiveDate,
    pub patch: String,
    /// Built-in template name or a literal step string.
    pub template: String,
    pub blue_team: String,
    pub red_team: String,
    pub steps: Vec<StepRecord>,
    pub winner: Side,
    pub duration_minutes: f64,
    #[serde(default)]
    pub players: Vec<PlayerRoundStats>,
    #[serde(default)]
    pub team_stats: Vec<TeamRoundStats>,
}

fn one() -> usize {
    1
}

impl MatchRecord {
    pub fn team_on(&self, side: Side) -> &str {
        match side {
            Side::Blue => &self.blue_team,
            Side::Red => &self.red_team,
        }
    }

    /// Side played by `team` in this round, if it took part.
    pub fn side_of(&self, team: &str) -> Option<Side> {
        if self.blue_team == team {
            Some(Side::Blue)
        } else if self.red_team == team {
            Some(Side::Red)
        } else {
            None
        }
    }

    pub fn picks(&self, side: Side) -> impl Iterator<Item = HeroId> + '_ {
        self.steps
            .iter()
            .filter(move |s| s.kind == ActionKind::Pick && s.side == side)
            .map(|s| s.hero)
    }

    pub fn bans(&self) -> impl Iterator<Item = HeroId> + '_ {
        self.steps
            .iter()
            .filter(|s| s.kind == ActionKind::Ban)
            .map(|s| s.hero)
    }

    pub fn team_stats_for(&self, side: Side) -> Option<&TeamRoundStats> {
        self.team_stats.iter().find(|t| t.side == side)
    }

    pub fn heroes(&self) -> Vec<HeroId> {
        self.steps.iter().map(|s| s.hero).collect()
    }
}

/// Resolves a template field: a built-in name, else a literal step string.
pub fn resolve_template(name: &str) -> Result<DraftTemplate, DraftError> {
    DraftTemplate::builtin(name).map_or_else(|| DraftTemplate::parse(name, name), Ok)
}

/// A versioned match log: hero registry, team registry and played rounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchLogFile {
    pub format: String,
    pub version: u32,
    /// Scope of the global rule used to validate rounds of the same series.
    /// Without it, rounds are checked one by one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global_policy: Option<GlobalBpPolicy>,
    pub heroes: Vec<HeroInfo>,
    #[serde(default)]
    pub teams: Vec<TeamInfo>,
    pub matches: Vec<MatchRecord>,
}

impl MatchLogFile {
    pub fn new(heroes: Vec<HeroInfo>, teams: Vec<TeamInfo>, matches: Vec<MatchRecord>) -> Self {
        MatchLogFile {
            format: FORMAT_NAME.into(),
            version: FORMAT_VERSION,
            global_policy: None,
            heroes,
            teams,
            matches,
        }
    }

    pub fn pool_size(&self) -> usize {
        self.heroes.len()
    }

    pub fn hero_name(&self, id: HeroId) -> Option<&str> {
        self.heroes.get(id.index()).map(|h| h.name.as_str())
    }

    pub fn hero_by_name(&self, name: &str) -> Option<HeroId> {
        self.heroes.iter().find(|h| h.name == name).map(|h| h.id)
    }

    /// Parses and fully validates a match log.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatchLogFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Checks the registry, replays every round through the draft rules and
    /// checks the per-round statistics.
    pub fn validate(&self) -> Result<()> {
        if self.format != FORMAT_NAME {
            return Err(DataError::Schema(format!("unexpected format `{}`", self.format)));
        }
        if self.version != FORMAT_VERSION {
            return Err(DataError::Schema(format!("unsupported version {}", self.version)));
        }
        for (i, h) in self.heroes.iter().enumerate() {
            if h.id.index() != i {
                return Err(DataError::Schema(format!(
                    "hero registry must list ids 0..n in order; entry {i} has id {}",
                    h.id
                )));
            }
        }
        let mut names = HashSet::new();
        for h in &self.heroes {
            if !names.insert(h.name.as_str()) {
                return Err(DataError::Schema(format!("duplicate hero name `{}`", h.name)));
            }
        }
        let teams: HashSet<&str> = self.teams.iter().map(|t| t.name.as_str()).collect();
        let mut ids = HashSet::new();
        for m in &self.matches {
            if !ids.insert(m.match_id.as_str()) {
                return Err(invalid(m, None, "duplicate match id"));
            }
            if !teams.is_empty() {
                for t in [&m.blue_team, &m.red_team] {
                    if !teams.contains(t.as_str()) {
                        return Err(invalid(m, None, format!("unknown team `{t}`")));
                    }
                }
            }
            self.validate_round(m)?;
        }
        if let Some(policy) = self.global_policy {
            self.validate_series(policy)?;
        }
        Ok(())
    }

    fn validate_round(&self, m: &MatchRecord) -> Result<()> {
        let template = Arc::new(resolve_template(&m.template).map_err(|e| invalid(m, None, e.to_string()))?);
        if m.steps.len() != template.len() {
            return Err(invalid(
                m,
                None,
                format!("{} steps recorded, template has {}", m.steps.len(), template.len()),
            ));
        }
        if m.blue_team == m.red_team {
            return Err(invalid(m, None, "a team cannot play itself"));
        }
        if !(m.duration_minutes > 0.0) {
            return Err(invalid(m, None, "duration must be positive"));
        }
        let series = SeriesState::new(template.clone(), self.pool_size(), 1, GlobalBpPolicy::EitherTeam)
            .map_err(|e| invalid(m, None, e.to_string()))?;
        let state = replay_steps(m, &series, series.new_round())?;
        for p in &m.players {
            if !(p.minutes > 0.0) {
                return Err(invalid(m, None, format!("player {} has non-positive minutes", p.player)));
            }
            if state.slots().get(p.hero.index()).copied() != Some(p.side.number() as i8) {
                return Err(invalid(
                    m,
                    None,
                    format!("player {} is listed on hero {} which the side did not pick", p.player, p.hero),
                ));
            }
            if m.team_on(p.side) != p.team {
                return Err(invalid(m, None, format!("player {} team does not match side", p.player)));
            }
        }
        Ok(())
    }

    fn validate_series(&self, policy: GlobalBpPolicy) -> Result<()> {
        let mut groups: BTreeMap<&str, Vec<&MatchRecord>> = BTreeMap::new();
        for m in &self.matches {
            if let Some(s) = &m.series_id {
                groups.entry(s.as_str()).or_default().push(m);
            }
        }
        for (_, mut rounds) in groups {
            rounds.sort_by_key(|m| m.round);
            let first = rounds[0];
            let ours = first.blue_team.clone();
            let best_of = first.best_of;
            let template = Arc::new(resolve_template(&first.template).map_err(|e| invalid(first, None, e.to_string()))?);
            let mut schedule = Vec::with_capacity(best_of);
            for r in 0..best_of {
                let side = rounds
                    .iter()
                    .find(|m| m.round == r + 1)
                    .and_then(|m| m.side_of(&ours))
                    .unwrap_or(if r % 2 == 0 { Side::Blue } else { Side::Red });
                schedule.push(side);
            }
            let mut series = SeriesState::new(template, self.pool_size(), best_of, policy)
                .and_then(|s| s.with_side_schedule(schedule))
                .map_err(|e| invalid(first, None, e.to_string()))?;
            for (k, m) in rounds.iter().enumerate() {
                if m.round != k + 1 || m.best_of != best_of {
                    return Err(invalid(m, None, "series rounds must be numbered 1.. with a common best-of"));
                }
                if m.side_of(&ours).is_none() || m.side_of(&first.red_team).is_none() {
                    return Err(invalid(m, None, "series round played by different teams"));
                }
                if series.is_terminal() {
                    return Err(invalid(m, None, "round played after the series was decided"));
                }
                let fin = replay_steps(m, &series, series.new_round())?;
                series = series
                    .advance_round(&fin, series.team_of(m.winner))
                    .map_err(|e| invalid(m, None, e.to_string()))?;
            }
        }
        Ok(())
    }

    /// Draft sequences of all rounds, for fitting the transition model.
    pub fn draft_sequences(&self) -> Result<Vec<DraftSequence>> {
        self.matches
            .iter()
            .map(|m| {
                let t = resolve_template(&m.template).map_err(|e| invalid(m, None, e.to_string()))?;
                Ok(DraftSequence::new(Arc::new(t), m.heroes()))
            })
            .collect()
    }

    /// Pick encodings with label 1 when blue won.
    pub fn win_dataset(&self) -> Dataset {
        let h = self.pool_size();
        let mut d = Dataset::default();
        for m in &self.matches {
            let blue: Vec<HeroId> = m.picks(Side::Blue).collect();
            let red: Vec<HeroId> = m.picks(Side::Red).collect();
            let x = crate::draft::encode_picks(&blue, &red, h);
            d.push(x, (m.winner == Side::Blue) as u8)
                .expect("encodings share the pool size");
        }
        d
    }

    pub fn hero_names(&self) -> HashMap<HeroId, &str> {
        self.heroes.iter().map(|h| (h.id, h.name.as_str())).collect()
    }
}

fn invalid(m: &MatchRecord, step: Option<usize>, reason: impl Into<String>) -> DataError {
    DataError::InvalidMatch {
        match_id: m.match_id.clone(),
        step,
        reason: reason.into(),
    }
}

fn replay_steps(m: &MatchRecord, series: &SeriesState, mut state: DraftState) -> Result<DraftState> {
    for (i, s) in m.steps.iter().enumerate() {
        let expected = state.current_actor().map_err(|e| invalid(m, Some(i), e.to_string()))?;
        if expected.side != s.side || expected.kind != s.kind {
            return Err(invalid(
                m,
                Some(i),
                format!("expected {:?} by {:?}, found {:?} by {:?}", expected.kind, expected.side, s.kind, s.side),
            ));
        }
        state = series
            .apply_action(&state, s.hero)
            .map_err(|e| invalid(m, Some(i), e.to_string()))?;
    }
    Ok(state)
}
