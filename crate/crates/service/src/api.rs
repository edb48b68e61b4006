use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use draftcoach_core::analytics::{
    hero_stats, patch_compare, player_box_stats, relation_table, team_radar, HeroStats,
    MatchFilter, PatchDiff, PlayerDistribution, PlayerMetric, Relation, RelationEntry, TeamRadar,
    DEFAULT_MIN_SUPPORT,
};
use draftcoach_core::data::MatchLogFile;
use draftcoach_core::draft::{HeroId, SeriesState, Team, DEFAULT_POOL_SIZE};
use draftcoach_core::markov::TransitionModel;
use draftcoach_core::mcts::{
    build_path, compare_drafts, predict_opponent, recommend, DraftComparison, DraftPath,
    MctsConfig, Models, Recommendation, RewardMode, RolloutPolicy,
};
use draftcoach_core::winrate::RoundPredictor;

use crate::error::{ApiError, ApiJson, ApiQuery};
use crate::session::{replay, CreateSession, Session, SessionSummary};

type ApiResult<T> = Result<Json<Envelope<T>>, ApiError>;

/// Models loaded at startup. Endpoints needing a missing one answer with
/// `model_missing`.
#[derive(Clone, Default)]
pub struct LoadedModels {
    pub win: Option<Arc<dyn RoundPredictor>>,
    pub markov: Option<Arc<TransitionModel>>,
    pub data: Option<Arc<MatchLogFile>>,
}

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    /// Default search seed when a request gives none.
    pub seed: u64,
    /// Upper bound on search iterations per request.
    pub iteration_cap: usize,
    pub search: MctsConfig,
    pub compare_samples: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            seed: 0,
            iteration_cap: 20_000,
            search: MctsConfig::default(),
            compare_samples: 200,
        }
    }
}

pub struct AppState {
    pub models: LoadedModels,
    pub config: ServiceConfig,
    sessions: Mutex<BTreeMap<String, Arc<tokio::sync::Mutex<Session>>>>,
    next_id: AtomicU64,
}

impl AppState {
    pub fn new(models: LoadedModels, config: ServiceConfig) -> Arc<Self> {
        Arc::new(AppState {
            models,
            config,
            sessions: Mutex::new(BTreeMap::new()),
            next_id: AtomicU64::new(1),
        })
    }

    fn default_pool(&self) -> usize {
        if let Some(m) = &self.models.markov {
            m.pool_size()
        } else if let Some(d) = &self.models.data {
            d.pool_size()
        } else {
            DEFAULT_POOL_SIZE
        }
    }

    fn session(&self, id: &str) -> Result<Arc<tokio::sync::Mutex<Session>>, ApiError> {
        self.sessions
            .lock()
            .expect("session map poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("unknown session {id:?}")))
    }

    async fn snapshot(&self, id: &str) -> Result<Session, ApiError> {
        Ok(self.session(id)?.lock().await.clone())
    }

    fn win(&self) -> Result<Arc<dyn RoundPredictor>, ApiError> {
        self.models.win.clone().ok_or_else(|| ApiError::model_missing("win-rate model"))
    }

    fn data(&self) -> Result<&MatchLogFile, ApiError> {
        self.models.data.as_deref().ok_or_else(|| ApiError::model_missing("match log"))
    }
}

/// Wrapper of every successful response.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub seed: u64,
    pub config: Value,
    pub result: T,
    #[serde(default)]
    pub warnings: Vec<String>,
}

fn envelope<T>(seed: u64, config: Value, result: T, warnings: Vec<String>) -> ApiResult<T> {
    Ok(Json(Envelope { seed, config, result, warnings }))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/session", post(create_session))
        .route("/session/{id}", get(get_session))
        .route("/session/{id}/commit", post(commit))
        .route("/session/{id}/undo", post(undo))
        .route("/session/{id}/finish-round", post(finish_round))
        .route("/recommend", post(recommend_handler))
        .route("/predict", post(predict_handler))
        .route("/path", post(path_handler))
        .route("/compare", post(compare_handler))
        .route("/stats/hero", get(stats_hero))
        .route("/stats/player", get(stats_player))
        .route("/stats/team", get(stats_team))
        .route("/relations", get(relations))
        .route("/patch-diff", get(patch_diff))
        .with_state(state)
}

async fn create_session(
    State(app): State<Arc<AppState>>,
    ApiJson(req): ApiJson<CreateSession>,
) -> Result<(StatusCode, Json<Envelope<SessionSummary>>), ApiError> {
    let id = format!("s{}", app.next_id.fetch_add(1, Ordering::SeqCst));
    let session = Session::create(id.clone(), &req, app.default_pool())?;
    let summary = session.summary();
    app.sessions
        .lock()
        .expect("session map poisoned")
        .insert(id, Arc::new(tokio::sync::Mutex::new(session)));
    let config = serde_json::to_value(&req).expect("serializable");
    Ok((StatusCode::CREATED, envelope(app.config.seed, config, summary, vec![])?))
}

async fn get_session(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<SessionSummary> {
    let s = app.snapshot(&id).await?;
    envelope(app.config.seed, json!({}), s.summary(), vec![])
}

#[derive(Debug, Deserialize)]
struct CommitReq {
    hero: HeroId,
}

async fn commit(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    ApiJson(req): ApiJson<CommitReq>,
) -> ApiResult<SessionSummary> {
    let handle = app.session(&id)?;
    let mut s = handle.lock().await;
    s.commit(req.hero)?;
    envelope(app.config.seed, json!({}), s.summary(), vec![])
}

async fn undo(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<SessionSummary> {
    let handle = app.session(&id)?;
    let mut s = handle.lock().await;
    s.undo()?;
    envelope(app.config.seed, json!({}), s.summary(), vec![])
}

#[derive(Debug, Deserialize)]
struct FinishReq {
    winner: Team,
}

async fn finish_round(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    ApiJson(req): ApiJson<FinishReq>,
) -> ApiResult<SessionSummary> {
    let handle = app.session(&id)?;
    let mut s = handle.lock().await;
    s.finish_round(req.winner)?;
    envelope(app.config.seed, json!({}), s.summary(), vec![])
}

/// Per-request overrides of the server's search defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default)]
pub struct SearchOptions {
    pub iterations: Option<usize>,
    pub c: Option<f64>,
    pub candidate_breadth: Option<usize>,
    pub rollout_policy: Option<RolloutPolicy>,
    pub reward_mode: Option<RewardMode>,
    pub seed: Option<u64>,
}

impl SearchOptions {
    fn resolve(&self, app: &AppState, warnings: &mut Vec<String>) -> MctsConfig {
        let base = &app.config.search;
        let mut iterations = self.iterations.unwrap_or(base.iterations);
        if iterations > app.config.iteration_cap {
            warnings.push(format!(
                "iterations {iterations} capped at the server limit {}",
                app.config.iteration_cap
            ));
            iterations = app.config.iteration_cap;
        }
        MctsConfig {
            c: self.c.unwrap_or(base.c),
            iterations,
            candidate_breadth: self.candidate_breadth.unwrap_or(base.candidate_breadth),
            rollout_policy: self.rollout_policy.unwrap_or(base.rollout_policy),
            reward_mode: self.reward_mode.unwrap_or(base.reward_mode),
            seed: self.seed.unwrap_or(app.config.seed),
        }
    }
}

#[derive(Debug, Deserialize)]
struct RecommendReq {
    session: String,
    #[serde(flatten)]
    options: SearchOptions,
}

async fn run_blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
}

async fn recommend_handler(State(app): State<Arc<AppState>>, ApiJson(req): ApiJson<RecommendReq>) -> ApiResult<Recommendation> {
    let s = app.snapshot(&req.session).await?;
    let mut warnings = vec![];
    let cfg = req.options.resolve(&app, &mut warnings);
    let win = app.win()?;
    let markov = app.models.markov.clone();
    let c2 = cfg.clone();
    let rec = run_blocking(move || {
        let models = Models::new(&*win, markov.as_deref());
        Ok(recommend(&s.series, &s.state, models, &c2)?)
    })
    .await?;
    envelope(cfg.seed, serde_json::to_value(&cfg).expect("serializable"), rec, warnings)
}

#[derive(Debug, Deserialize)]
struct PredictReq {
    session: String,
    #[serde(default = "three")]
    k: usize,
}

fn three() -> usize {
    3
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Prediction {
    pub hero: HeroId,
    pub probability: f64,
}

async fn predict_handler(State(app): State<Arc<AppState>>, ApiJson(req): ApiJson<PredictReq>) -> ApiResult<Vec<Prediction>> {
    let s = app.snapshot(&req.session).await?;
    let markov = app.models.markov.as_deref().ok_or_else(|| ApiError::model_missing("transition model"))?;
    if s.series.is_terminal() {
        return Err(draftcoach_core::draft::DraftError::SeriesOver.into());
    }
    let top = predict_opponent(&s.series, &s.state, markov, req.k)?;
    let result = top.into_iter().map(|(hero, probability)| Prediction { hero, probability }).collect();
    envelope(app.config.seed, json!({ "k": req.k }), result, vec![])
}

#[derive(Debug, Deserialize, Serialize)]
struct Override {
    /// Path index, 0 being the pending step.
    index: usize,
    hero: HeroId,
}

#[derive(Debug, Deserialize)]
struct PathReq {
    session: String,
    depth: usize,
    #[serde(default)]
    overrides: Vec<Override>,
    #[serde(flatten)]
    options: SearchOptions,
}

async fn path_handler(State(app): State<Arc<AppState>>, ApiJson(req): ApiJson<PathReq>) -> ApiResult<DraftPath> {
    let s = app.snapshot(&req.session).await?;
    let mut warnings = vec![];
    let cfg = req.options.resolve(&app, &mut warnings);
    let remaining = s.state.remaining_steps();
    let depth = if req.depth > remaining {
        warnings.push(format!("depth {} clamped to the {remaining} steps left in the round", req.depth));
        remaining
    } else {
        req.depth
    };
    let win = app.win()?;
    let markov = app.models.markov.clone();
    let overrides: Vec<(usize, HeroId)> = req.overrides.iter().map(|o| (o.index, o.hero)).collect();
    let c2 = cfg.clone();
    let path = run_blocking(move || {
        let models = Models::new(&*win, markov.as_deref());
        Ok(build_path(&s.series, &s.state, depth, models, &c2, &overrides)?)
    })
    .await?;
    let mut config = serde_json::to_value(&cfg).expect("serializable");
    config["depth"] = json!(depth);
    config["overrides"] = json!(req.overrides);
    envelope(cfg.seed, config, path, warnings)
}

#[derive(Debug, Deserialize)]
struct CompareReq {
    session: String,
    /// Complete hero sequences for the session's current round.
    drafts: Vec<Vec<HeroId>>,
    samples: Option<usize>,
    #[serde(flatten)]
    options: SearchOptions,
}

async fn compare_handler(State(app): State<Arc<AppState>>, ApiJson(req): ApiJson<CompareReq>) -> ApiResult<Vec<DraftComparison>> {
    let s = app.snapshot(&req.session).await?;
    let mut warnings = vec![];
    let cfg = req.options.resolve(&app, &mut warnings);
    let samples = req.samples.unwrap_or(app.config.compare_samples);
    let win = app.win()?;
    let markov = app.models.markov.clone();
    let series: SeriesState = s.series.clone();
    let drafts = req
        .drafts
        .iter()
        .map(|d| replay(&series, d))
        .collect::<Result<Vec<_>, _>>()?;
    let c2 = cfg.clone();
    let rows = run_blocking(move || {
        let models = Models::new(&*win, markov.as_deref());
        Ok(compare_drafts(&series, &drafts, models, &c2, samples)?)
    })
    .await?;
    let mut config = serde_json::to_value(&cfg).expect("serializable");
    config["samples"] = json!(samples);
    envelope(cfg.seed, config, rows, warnings)
}

#[derive(Debug, Default, Deserialize, Serialize)]
pub struct HeroQuery {
    pub from: Option<NaiveDate>,
    pub before: Option<NaiveDate>,
    pub patch: Option<String>,
    pub team: Option<String>,
}

impl HeroQuery {
    pub fn filter(&self) -> MatchFilter {
        let mut f = MatchFilter::all();
        if let Some(d) = self.from {
            f = f.from(d);
        }
        if let Some(d) = self.before {
            f = f.before(d);
        }
        if let Some(p) = &self.patch {
            f = f.patch(p.clone());
        }
        if let Some(t) = &self.team {
            f = f.team(t.clone());
        }
        f
    }
}

async fn stats_hero(State(app): State<Arc<AppState>>, ApiQuery(q): ApiQuery<HeroQuery>) -> ApiResult<Vec<HeroStats>> {
    let data = app.data()?;
    let stats = hero_stats(&data.matches, &q.filter()).into_values().collect();
    envelope(app.config.seed, serde_json::to_value(&q).expect("serializable"), stats, vec![])
}

#[derive(Debug, Deserialize, Serialize)]
struct PlayerQuery {
    player: String,
    #[serde(default = "default_metric")]
    metric: PlayerMetric,
    highlight: Option<HeroId>,
}

fn default_metric() -> PlayerMetric {
    PlayerMetric::Kda
}

async fn stats_player(State(app): State<Arc<AppState>>, ApiQuery(q): ApiQuery<PlayerQuery>) -> ApiResult<PlayerDistribution> {
    let data = app.data()?;
    let d = player_box_stats(&data.matches, &q.player, q.metric, q.highlight)?;
    envelope(app.config.seed, serde_json::to_value(&q).expect("serializable"), d, vec![])
}

#[derive(Debug, Deserialize, Serialize)]
struct TeamQuery {
    team: String,
    /// Comma-separated hero ids that must all be picked by the team.
    #[serde(default)]
    heroes: String,
}

pub fn parse_hero_list(text: &str) -> Result<Vec<HeroId>, ApiError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u16>()
                .map(HeroId)
                .map_err(|_| ApiError::bad_request(format!("bad hero id {s:?}")))
        })
        .collect()
}

async fn stats_team(State(app): State<Arc<AppState>>, ApiQuery(q): ApiQuery<TeamQuery>) -> ApiResult<TeamRadar> {
    let data = app.data()?;
    let heroes = parse_hero_list(&q.heroes)?;
    let r = team_radar(&data.matches, &q.team, &heroes);
    envelope(app.config.seed, serde_json::to_value(&q).expect("serializable"), r, vec![])
}

#[derive(Debug, Deserialize, Serialize)]
struct RelationQuery {
    hero: HeroId,
    relation: Relation,
    #[serde(default = "default_support")]
    min_support: usize,
    /// Return the whole table instead of the top three.
    #[serde(default)]
    all: bool,
}

fn default_support() -> usize {
    DEFAULT_MIN_SUPPORT
}

async fn relations(State(app): State<Arc<AppState>>, ApiQuery(q): ApiQuery<RelationQuery>) -> ApiResult<Vec<RelationEntry>> {
    let data = app.data()?;
    let mut t = relation_table(&data.matches, q.hero, q.relation, q.min_support)?;
    if !q.all {
        t.truncate(3);
    }
    envelope(app.config.seed, serde_json::to_value(&q).expect("serializable"), t, vec![])
}

#[derive(Debug, Deserialize, Serialize)]
struct PatchQuery {
    date: NaiveDate,
    hero: HeroId,
    team: Option<String>,
}

async fn patch_diff(State(app): State<Arc<AppState>>, ApiQuery(q): ApiQuery<PatchQuery>) -> ApiResult<PatchDiff> {
    let data = app.data()?;
    let d = patch_compare(&data.matches, q.date, q.hero, q.team.as_deref())?;
    let mut warnings = vec![];
    if let Some(o) = &d.team {
        if o.before.matches_total == 0 || o.after.matches_total == 0 {
            warnings.push(format!("team {} has no rounds on one side of the patch date", o.team));
        }
    }
    envelope(app.config.seed, serde_json::to_value(&q).expect("serializable"), d, warnings)
}
