//! Match-log schema, loading and validation, plus a synthetic league with a
//! closed-form win-probability oracle.

mod schema;
mod synth;

use thiserror::Error;

use crate::draft::DraftError;

pub use schema::{
    resolve_template, HeroInfo, MatchLogFile, MatchRecord, PlayerRoundStats, StepRecord,
    TeamInfo, TeamRoundStats, FORMAT_NAME, FORMAT_VERSION,
};
pub use synth::{
    generate_synthetic, oracle_winrate, PatchShift, SyntheticConfig, SyntheticOracle, ROLES,
};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("match {match_id}{}: {reason}", step_suffix(*.step))]
    InvalidMatch {
        match_id: String,
        step: Option<usize>,
        reason: String,
    },
    #[error("invalid match log: {0}")]
    Schema(String),
    #[error("oracle needs {expected} picks per side, got {blue} blue and {red} red")]
    PickCount { expected: usize, blue: usize, red: usize },
    #[error(transparent)]
    Draft(#[from] DraftError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn step_suffix(step: Option<usize>) -> String {
    step.map(|s| format!(" step {s}")).unwrap_or_default()
}

pub type Result<T, E = DataError> = std::result::Result<T, E>;
