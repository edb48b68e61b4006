//! The `draftcoach` command line.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use draftcoach_core::analytics::{
    hero_stats, patch_compare, player_box_stats, relation_table, team_radar,
    PlayerMetric, Relation, DEFAULT_MIN_SUPPORT,
};
use draftcoach_core::data::{generate_synthetic, resolve_template, MatchLogFile, SyntheticConfig};
use draftcoach_core::draft::{DraftState, GlobalBpPolicy, HeroId, SeriesState, Side, Team, DEFAULT_POOL_SIZE};
use draftcoach_core::markov::{MarkovConfig, TransitionModel};
use draftcoach_core::mcts::{
    build_path, compare_drafts, predict_opponent, recommend, run_series_experiment, DraftPolicy,
    ExperimentSetup, MctsConfig, Models, RewardMode, RolloutPolicy,
};
use draftcoach_core::winrate::{
    evaluate, train_lr, train_rf, ForestParams, LogisticParams, RoundPredictor, WinModel,
};

use crate::api::{parse_hero_list, router, AppState, LoadedModels, ServiceConfig};
use crate::session::replay;

#[derive(Debug, Parser)]
#[command(name = "draftcoach", version, about = "Draft recommendation for best-of-N MOBA series")]
pub struct Cli {
    /// Match log (JSON).
    #[arg(long, global = true, env = "DRAFTCOACH_DATA")]
    pub data: Option<PathBuf>,
    /// Fitted transition model.
    #[arg(long, global = true, env = "DRAFTCOACH_MARKOV_MODEL")]
    pub markov_model: Option<PathBuf>,
    /// Trained win-rate model.
    #[arg(long, global = true, env = "DRAFTCOACH_WIN_MODEL")]
    pub win_model: Option<PathBuf>,
    /// Synthetic league config whose closed-form oracle replaces the win model.
    #[arg(long, global = true, env = "DRAFTCOACH_ORACLE")]
    pub oracle: Option<PathBuf>,
    #[arg(long, global = true, env = "DRAFTCOACH_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic match log.
    Synth(SynthArgs),
    /// Train a win-rate model on --data.
    Train(TrainArgs),
    /// Fit the opponent transition model on --data.
    FitMarkov(FitMarkovArgs),
    /// Recommend our next ban or pick.
    Recommend {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Predict the opponent's next ban or pick.
    Predict {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 3)]
        top: usize,
    },
    /// Build a recommended and predicted path through the round.
    Path {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        depth: usize,
        /// `INDEX:HERO`, replaces the hero at that path index.
        #[arg(long = "override", value_parser = parse_override)]
        overrides: Vec<(usize, HeroId)>,
    },
    /// Expected wins for finished drafts of the current round.
    Compare {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Comma-separated hero ids of a complete round; repeat per draft.
        #[arg(long = "draft", required = true)]
        drafts: Vec<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Play policy A against policy B over many series.
    Experiment(ExperimentArgs),
    /// Aggregates over --data as CSV.
    Stats {
        #[command(subcommand)]
        view: StatsView,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, env = "DRAFTCOACH_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = 20_000)]
        iteration_cap: usize,
    },
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 1200)]
    pub matches: usize,
    #[arg(long, default_value_t = DEFAULT_POOL_SIZE)]
    pub heroes: usize,
    #[arg(long, default_value_t = 0.5)]
    pub strength_sd: f64,
    #[arg(long, default_value_t = 0.2)]
    pub synergy_sd: f64,
    #[arg(long, default_value_t = 0.2)]
    pub counter_sd: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 3)]
    pub best_of: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the league config, usable with --oracle.
    #[arg(long)]
    pub config_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModelKind {
    Rf,
    Lr,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum, default_value = "rf")]
    pub model: ModelKind,
    #[arg(long, default_value_t = 0.8)]
    pub split: f64,
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    #[arg(long, default_value_t = 12)]
    pub max_depth: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitMarkovArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    #[arg(long, default_value = "hok")]
    pub template: String,
    #[arg(long, default_value_t = 3)]
    pub best_of: usize,
    #[arg(long, value_enum, default_value = "either-team")]
    pub policy: PolicyArg,
    /// Side our team plays in round one.
    #[arg(long, value_enum, default_value = "blue")]
    pub first_side: SideArg,
    /// Defaults to the transition model's or match log's pool size.
    #[arg(long)]
    pub pool_size: Option<usize>,
    /// Finished round as `HEROES:WINNER` (ids comma-separated, winner
    /// `ours` or `theirs`); repeat in order.
    #[arg(long = "round")]
    pub rounds: Vec<String>,
    /// Heroes already committed in the current round.
    #[arg(long, default_value = "")]
    pub steps: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PolicyArg {
    SelfOnly,
    EitherTeam,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Blue,
    Red,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 10_000)]
    pub iterations: usize,
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    pub c: f64,
    /// Candidate breadth per node.
    #[arg(short = 'k', long = "breadth", default_value_t = 10)]
    pub breadth: usize,
    #[arg(long, value_enum, default_value = "markov-sampled")]
    pub rollout: RolloutArg,
    #[arg(long, value_enum, default_value = "expected-wins")]
    pub reward_mode: RewardArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RolloutArg {
    MarkovSampled,
    UniformLegal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RewardArg {
    ExpectedWins,
    BernoulliSampled,
    SeriesWinProbability,
}

impl SearchArgs {
    fn config(&self, seed: u64) -> MctsConfig {
        MctsConfig {
            c: self.c,
            iterations: self.iterations,
            candidate_breadth: self.breadth,
            rollout_policy: match self.rollout {
                RolloutArg::MarkovSampled => RolloutPolicy::MarkovSampled,
                RolloutArg::UniformLegal => RolloutPolicy::UniformLegal,
            },
            reward_mode: match self.reward_mode {
                RewardArg::ExpectedWins => RewardMode::ExpectedWins,
                RewardArg::BernoulliSampled => RewardMode::BernoulliSampled,
                RewardArg::SeriesWinProbability => RewardMode::SeriesWinProbability,
            },
            seed,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PolicyKind {
    Rd,
    Hwr,
    Mcts,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub a: PolicyKind,
    #[arg(long, value_enum)]
    pub b: PolicyKind,
    #[arg(long, default_value_t = 300)]
    pub trials: usize,
    #[arg(long, default_value_t = 3)]
    pub best_of: usize,
    #[arg(long, default_value = "hok")]
    pub template: String,
    #[arg(long, value_enum, default_value = "either-team")]
    pub policy: PolicyArg,
    #[arg(long)]
    pub pool_size: Option<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Subcommand)]
pub enum StatsView {
    /// Per-hero pick, ban and win rates
    Hero {
        #[arg(long)]
        from: Option<NaiveDate>,
        #[arg(long)]
        before: Option<NaiveDate>,
        #[arg(long)]
        patch: Option<String>,
        #[arg(long)]
        team: Option<String>,
    },
    /// Box-plot summary of one player's metric
    Player {
        #[arg(long)]
        player: String,
        #[arg(long, value_enum, default_value = "kda")]
        metric: MetricArg,
        #[arg(long)]
        highlight: Option<u16>,
    },
    /// Radar values for a team, optionally restricted to rounds with given picks
    Team {
        #[arg(long)]
        team: String,
        /// Comma-separated hero ids the team must have picked.
        #[arg(long, default_value = "")]
        heroes: String,
    },
    /// Synergy or counter table for a hero
    Relations {
        #[arg(long)]
        hero: u16,
        #[arg(long, value_enum)]
        relation: RelationArg,
        #[arg(long, default_value_t = DEFAULT_MIN_SUPPORT)]
        min_support: usize,
        /// Full table instead of the top three.
        #[arg(long)]
        all: bool,
    },
    /// Hero stats before and after a patch date
    PatchDiff {
        #[arg(long)]
        date: NaiveDate,
        #[arg(long)]
        hero: u16,
        #[arg(long)]
        team: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MetricArg {
    Kills,
    Deaths,
    Assists,
    Kda,
    Damage,
    DamageTaken,
    Gold,
    GoldPerMinute,
    DamagePerMinute,
    Participation,
}

impl From<MetricArg> for PlayerMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Kills => PlayerMetric::Kills,
            MetricArg::Deaths => PlayerMetric::Deaths,
            MetricArg::Assists => PlayerMetric::Assists,
            MetricArg::Kda => PlayerMetric::Kda,
            MetricArg::Damage => PlayerMetric::Damage,
            MetricArg::DamageTaken => PlayerMetric::DamageTaken,
            MetricArg::Gold => PlayerMetric::Gold,
            MetricArg::GoldPerMinute => PlayerMetric::GoldPerMinute,
            MetricArg::DamagePerMinute => PlayerMetric::DamagePerMinute,
            MetricArg::Participation => PlayerMetric::Participation,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RelationArg {
    Synergy,
    Counters,
    CounteredBy,
}

impl From<RelationArg> for Relation {
    fn from(r: RelationArg) -> Self {
        match r {
            RelationArg::Synergy => Relation::Synergy,
            RelationArg::Counters => Relation::Counters,
            RelationArg::CounteredBy => Relation::CounteredBy,
        }
    }
}

fn parse_override(s: &str) -> Result<(usize, HeroId), String> {
    let (i, h) = s.split_once(':').ok_or("expected INDEX:HERO")?;
    Ok((
        i.trim().parse().map_err(|_| format!("bad index {i:?}"))?,
        HeroId(h.trim().parse().map_err(|_| format!("bad hero {h:?}"))?),
    ))
}

fn heroes(text: &str) -> Result<Vec<HeroId>> {
    parse_hero_list(text).map_err(|e| anyhow::anyhow!(e.message))
}

/// Models named by the global flags.
struct Loaded {
    win: Option<Arc<dyn RoundPredictor>>,
    markov: Option<Arc<TransitionModel>>,
    data: Option<Arc<MatchLogFile>>,
}

impl Loaded {
    fn from_cli(cli: &Cli) -> Result<Self> {
        let win: Option<Arc<dyn RoundPredictor>> = match (&cli.win_model, &cli.oracle) {
            (Some(_), Some(_)) => bail!("--win-model and --oracle are exclusive"),
            (Some(p), None) => Some(Arc::new(
                WinModel::load(p).with_context(|| format!("loading win model {}", p.display()))?,
            )),
            (None, Some(p)) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let cfg: SyntheticConfig = serde_json::from_str(&text)?;
                cfg.validate()?;
                Some(Arc::new(cfg.oracle()))
            }
            (None, None) => None,
        };
        let markov = match &cli.markov_model {
            Some(p) => Some(Arc::new(
                TransitionModel::load(p).with_context(|| format!("loading transition model {}", p.display()))?,
            )),
            None => None,
        };
        let data = match &cli.data {
            Some(p) => Some(Arc::new(
                MatchLogFile::load(p).with_context(|| format!("loading match log {}", p.display()))?,
            )),
            None => None,
        };
        Ok(Loaded { win, markov, data })
    }

    fn win(&self) -> Result<&dyn RoundPredictor> {
        self.win.as_deref().context("this command needs --win-model or --oracle")
    }

    fn data(&self) -> Result<&MatchLogFile> {
        self.data.as_deref().context("this command needs --data")
    }

    fn pool_size(&self, explicit: Option<usize>) -> usize {
        explicit
            .or_else(|| self.markov.as_ref().map(|m| m.pool_size()))
            .or_else(|| self.data.as_ref().map(|d| d.pool_size()))
            .unwrap_or(DEFAULT_POOL_SIZE)
    }
}

fn policy(p: PolicyArg) -> GlobalBpPolicy {
    match p {
        PolicyArg::SelfOnly => GlobalBpPolicy::SelfOnly,
        PolicyArg::EitherTeam => GlobalBpPolicy::EitherTeam,
    }
}

fn build_series(args: &SeriesArgs, loaded: &Loaded) -> Result<(SeriesState, DraftState)> {
    let template = Arc::new(resolve_template(&args.template)?);
    let first = match args.first_side {
        SideArg::Blue => Side::Blue,
        SideArg::Red => Side::Red,
    };
    let schedule = (0..args.best_of).map(|r| if r % 2 == 0 { first } else { first.other() }).collect();
    let mut series = SeriesState::new(template, loaded.pool_size(args.pool_size), args.best_of, policy(args.policy))?
        .with_side_schedule(schedule)?;
    for r in &args.rounds {
        let (hs, winner) = r.rsplit_once(':').context("--round expects HEROES:WINNER")?;
        let winner = match winner.trim() {
            "ours" => Team::Ours,
            "theirs" => Team::Theirs,
            w => bail!("round winner must be ours or theirs, got {w:?}"),
        };
        let done = replay(&series, &heroes(hs)?)?;
        series = series.advance_round(&done, winner)?;
    }
    let state = replay(&series, &heroes(&args.steps)?)?;
    Ok((series, state))
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Runs one command, writing its result to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let loaded = Loaded::from_cli(&cli)?;
    let seed = cli.seed;
    match cli.command {
        Command::Synth(a) => {
            let mut cfg = SyntheticConfig::random(a.heroes, a.strength_sd, a.synergy_sd, a.counter_sd, seed);
            cfg.tau = a.tau;
            cfg.best_of = a.best_of;
            let (file, _) = generate_synthetic(&cfg, a.matches)?;
            file.save(&a.out)?;
            if let Some(p) = &a.config_out {
                std::fs::write(p, serde_json::to_string_pretty(&cfg)?)?;
            }
            writeln!(out, "wrote {} matches to {}", file.matches.len(), a.out.display())?;
        }
        Command::Train(a) => {
            let data = loaded.data()?.win_dataset();
            let (train, test) = data.split(a.split, seed)?;
            let model = match a.model {
                ModelKind::Rf => WinModel::Forest(train_rf(
                    &train,
                    &ForestParams { n_trees: a.trees, max_depth: a.max_depth, seed, ..Default::default() },
                )),
                ModelKind::Lr => WinModel::Logistic(train_lr(&train, &LogisticParams { seed, ..Default::default() })),
            };
            let report = evaluate(&model, &test)?;
            model.save(&a.out)?;
            print_json(out, &report)?;
        }
        Command::FitMarkov(a) => {
            let file = loaded.data()?;
            let cfg = MarkovConfig { alpha: a.alpha, pool_size: file.pool_size(), ..Default::default() };
            let model = TransitionModel::fit(&file.draft_sequences()?, cfg)?;
            model.save(&a.out)?;
            writeln!(out, "fitted {} contexts to {}", model.context_count(), a.out.display())?;
        }
        Command::Recommend { series, search } => {
            let (s, st) = build_series(&series, &loaded)?;
            let models = Models::new(loaded.win()?, loaded.markov.as_deref());
            print_json(out, &recommend(&s, &st, models, &search.config(seed))?)?;
        }
        Command::Predict { series, top } => {
            let (s, st) = build_series(&series, &loaded)?;
            let m = loaded.markov.as_deref().context("predict needs --markov-model")?;
            print_json(out, &predict_opponent(&s, &st, m, top)?)?;
        }
        Command::Path { series, search, depth, overrides } => {
            let (s, st) = build_series(&series, &loaded)?;
            let remaining = st.remaining_steps();
            if depth > remaining {
                log::warn!("depth {depth} clamped to the {remaining} steps left in the round");
            }
            let models = Models::new(loaded.win()?, loaded.markov.as_deref());
            let path = build_path(&s, &st, depth.min(remaining), models, &search.config(seed), &overrides)?;
            print_json(out, &path)?;
        }
        Command::Compare { series, search, drafts, samples } => {
            let (s, _) = build_series(&series, &loaded)?;
            let finished = drafts
                .iter()
                .map(|d| Ok(replay(&s, &heroes(d)?)?))
                .collect::<Result<Vec<_>>>()?;
            let models = Models::new(loaded.win()?, loaded.markov.as_deref());
            print_json(out, &compare_drafts(&s, &finished, models, &search.config(seed), samples)?)?;
        }
        Command::Experiment(a) => {
            let to_policy = |k: PolicyKind| match k {
                PolicyKind::Rd => DraftPolicy::Random,
                PolicyKind::Hwr => DraftPolicy::HighestWinRate,
                PolicyKind::Mcts => DraftPolicy::Mcts(a.search.config(seed)),
            };
            let setup = ExperimentSetup {
                template: Arc::new(resolve_template(&a.template)?),
                pool_size: loaded.pool_size(a.pool_size),
                best_of: a.best_of,
                policy: policy(a.policy),
            };
            let models = Models::new(loaded.win()?, loaded.markov.as_deref());
            let r = run_series_experiment(&to_policy(a.a), &to_policy(a.b), &setup, models, a.trials, seed)?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["a", "b", "best_of", "trials", "wins", "win_rate", "ci_low", "ci_high", "rounds_played"])?;
            let (lo, hi) = r.ci();
            w.write_record([
                format!("{:?}", a.a).to_lowercase(),
                format!("{:?}", a.b).to_lowercase(),
                a.best_of.to_string(),
                r.trials.to_string(),
                r.wins.to_string(),
                r.win_rate.to_string(),
                lo.to_string(),
                hi.to_string(),
                r.rounds_played.to_string(),
            ])?;
            w.flush()?;
        }
        Command::Stats { view } => stats(loaded.data()?, view, out)?,
        Command::Serve { port, iteration_cap } => {
            let models = LoadedModels { win: loaded.win, markov: loaded.markov, data: loaded.data };
            let config = ServiceConfig { seed, iteration_cap, ..Default::default() };
            let app = router(AppState::new(models, config));
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
                log::info!("listening on {}", listener.local_addr()?);
                axum::serve(listener, app).await?;
                anyhow::Ok(())
            })?;
        }
    }
    Ok(())
}

fn stats(data: &MatchLogFile, view: StatsView, out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    match view {
        StatsView::Hero { from, before, patch, team } => {
            let q = crate::api::HeroQuery { from, before, patch, team };
            w.write_record([
                "hero", "name", "games", "wins", "picks", "bans", "matches_total", "win_rate",
                "picked_rate", "banned_rate", "avg_kills", "avg_deaths", "avg_assists",
            ])?;
            for s in hero_stats(&data.matches, &q.filter()).values() {
                w.write_record([
                    s.hero.to_string(),
                    data.hero_name(s.hero).unwrap_or_default().to_string(),
                    s.games.to_string(),
                    s.wins.to_string(),
                    s.picks.to_string(),
                    s.bans.to_string(),
                    s.matches_total.to_string(),
                    opt(s.win_rate),
                    opt(s.picked_rate),
                    opt(s.banned_rate),
                    opt(s.avg_kills),
                    opt(s.avg_deaths),
                    opt(s.avg_assists),
                ])?;
            }
        }
        StatsView::Player { player, metric, highlight } => {
            let d = player_box_stats(&data.matches, &player, metric.into(), highlight.map(HeroId))?;
            w.write_record(["match_id", "hero", "value", "highlighted"])?;
            for p in &d.points {
                w.write_record([p.match_id.clone(), p.hero.to_string(), p.value.to_string(), p.highlighted.to_string()])?;
            }
            log::info!(
                "min {} q1 {} median {} q3 {} max {} outliers {}",
                d.min, d.q1, d.median, d.q3, d.max, d.outliers.len()
            );
        }
        StatsView::Team { team, heroes: hs } => {
            let r = team_radar(&data.matches, &team, &heroes(&hs)?);
            w.write_record(["team", "heroes", "samples", "win_rate", "team_kda", "avg_tyrants", "avg_dragons", "avg_towers", "avg_duration"])?;
            w.write_record([
                r.team.clone(),
                hs,
                r.samples.to_string(),
                opt(r.win_rate),
                opt(r.team_kda),
                opt(r.avg_tyrants),
                opt(r.avg_dragons),
                opt(r.avg_towers),
                opt(r.avg_duration),
            ])?;
        }
        StatsView::Relations { hero, relation, min_support, all } => {
            let mut t = relation_table(&data.matches, HeroId(hero), relation.into(), min_support)?;
            if !all {
                t.truncate(3);
            }
            w.write_record(["hero", "other", "relation", "joint_games", "joint_wins", "rate"])?;
            for e in t {
                w.write_record([
                    hero.to_string(),
                    e.other.to_string(),
                    serde_json::to_value(e.relation)?.as_str().unwrap_or_default().to_string(),
                    e.joint_games.to_string(),
                    e.joint_wins.to_string(),
                    e.rate.to_string(),
                ])?;
            }
        }
        StatsView::PatchDiff { date, hero, team } => {
            let d = patch_compare(&data.matches, date, HeroId(hero), team.as_deref())?;
            w.write_record(["scope", "window", "matches", "picks", "bans", "win_rate", "picked_rate", "banned_rate", "avg_kills", "avg_deaths", "avg_assists"])?;
            let mut rows = vec![("all".to_string(), "before", &d.before), ("all".to_string(), "after", &d.after)];
            if let Some(o) = &d.team {
                rows.push((o.team.clone(), "before", &o.before));
                rows.push((o.team.clone(), "after", &o.after));
            }
            for (scope, window, s) in rows {
                w.write_record([
                    scope,
                    window.to_string(),
                    s.matches_total.to_string(),
                    s.picks.to_string(),
                    s.bans.to_string(),
                    opt(s.win_rate),
                    opt(s.picked_rate),
                    opt(s.banned_rate),
                    opt(s.avg_kills),
                    opt(s.avg_deaths),
                    opt(s.avg_assists),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
