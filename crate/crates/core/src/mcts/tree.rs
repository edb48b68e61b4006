use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::draft::{DraftState, HeroId, SeriesState, Team};
use crate::markov::{MarkovError, TransitionModel};

use super::rollout::{simulate, Position};
use super::uct::{uct_score, ChildStats};
use super::{MctsConfig, MctsError, Models, Result, RewardMode};

pub type NodeId = usize;

#[derive(Clone, Debug)]
pub struct SearchNode {
    pos: Position,
    hero: Option<HeroId>,
    parent: Option<NodeId>,
    actor: Option<Team>,
    children: Vec<NodeId>,
    /// `None` until the node is first expanded.
    untried: Option<Vec<HeroId>>,
    visits: u64,
    total_reward: f64,
    rollouts: u64,
}

impl SearchNode {
    fn new(pos: Position, hero: Option<HeroId>, parent: Option<NodeId>) -> Self {
        let actor = pos.actor();
        SearchNode {
            pos,
            hero,
            parent,
            actor,
            children: Vec::new(),
            untried: None,
            visits: 0,
            total_reward: 0.0,
            rollouts: 0,
        }
    }

    /// Action leading into this node; `None` at the root.
    pub fn hero(&self) -> Option<HeroId> {
        self.hero
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    /// Team to move; `None` once every round has been drafted.
    pub fn actor(&self) -> Option<Team> {
        self.actor
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    pub fn untried(&self) -> &[HeroId] {
        self.untried.as_deref().unwrap_or(&[])
    }

    pub fn visits(&self) -> u64 {
        self.visits
    }

    pub fn total_reward(&self) -> f64 {
        self.total_reward
    }

    /// Rollouts started from this node.
    pub fn rollouts(&self) -> u64 {
        self.rollouts
    }

    pub fn q(&self) -> Option<f64> {
        (self.visits > 0).then(|| self.total_reward / self.visits as f64)
    }

    pub fn draft(&self) -> &DraftState {
        &self.pos.draft
    }

    pub fn series(&self) -> &SeriesState {
        &self.pos.series
    }

    /// Our win probabilities for rounds completed between the root and here.
    pub fn round_probabilities(&self) -> &[f64] {
        &self.pos.round_ps
    }
}

/// A child of the root as reported to callers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedAction {
    pub hero: HeroId,
    /// Mean reward of the child, our perspective.
    pub score: f64,
    pub visits: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    /// Root children by visits, then score, then ascending id.
    pub ranked: Vec<RankedAction>,
    pub chosen: HeroId,
    pub iterations: usize,
    /// Upper bound of the reward, used for the opponent's flip.
    pub horizon: f64,
}

pub struct SearchTree<'a> {
    nodes: Vec<SearchNode>,
    models: Models<'a>,
    config: MctsConfig,
    horizon: f64,
    rng: ChaCha8Rng,
    mask: Vec<bool>,
    path: Vec<NodeId>,
    iterations: usize,
}

impl<'a> SearchTree<'a> {
    pub fn new(
        series: &SeriesState,
        state: &DraftState,
        models: Models<'a>,
        config: &MctsConfig,
    ) -> Result<Self> {
        config.validate()?;
        if series.is_terminal() {
            return Err(crate::draft::DraftError::SeriesOver.into());
        }
        state.current_actor()?;
        if let Some(m) = models.markov {
            if m.pool_size() != series.pool_size() {
                return Err(MarkovError::MaskSize {
                    expected: m.pool_size(),
                    got: series.pool_size(),
                }
                .into());
            }
        }
        let horizon = match config.reward_mode {
            RewardMode::SeriesWinProbability => 1.0,
            _ => series.remaining_rounds() as f64,
        };
        let root = SearchNode::new(Position::new(series.clone(), state.clone(), &models), None, None);
        Ok(SearchTree {
            nodes: vec![root],
            models,
            config: config.clone(),
            horizon,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            mask: Vec::with_capacity(series.pool_size()),
            path: Vec::new(),
            iterations: 0,
        })
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &SearchNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[SearchNode] {
        &self.nodes
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn child_stats(&self, id: NodeId) -> Vec<ChildStats> {
        self.nodes[id]
            .children
            .iter()
            .map(|&c| ChildStats {
                hero: self.nodes[c].hero.expect("child has an action"),
                visits: self.nodes[c].visits,
                total_reward: self.nodes[c].total_reward,
            })
            .collect()
    }

    pub fn run(&mut self, iterations: usize) {
        for _ in 0..iterations {
            self.iterate();
        }
    }

    /// One round of selection, expansion, rollout and backpropagation.
    pub fn iterate(&mut self) {
        self.path.clear();
        let mut id = self.root();
        self.path.push(id);
        loop {
            if self.nodes[id].untried.is_none() {
                let c = self.candidates(id);
                self.nodes[id].untried = Some(c);
            }
            if let Some(child) = self.expand(id) {
                id = child;
                self.path.push(id);
                break;
            }
            if self.nodes[id].children.is_empty() {
                break;
            }
            id = self.select(id);
            self.path.push(id);
        }
        let reward = simulate(
            &self.nodes[id].pos,
            &self.models,
            self.config.rollout_policy,
            self.config.reward_mode,
            &mut self.rng,
            &mut self.mask,
        );
        self.nodes[id].rollouts += 1;
        for &n in &self.path {
            self.nodes[n].visits += 1;
            self.nodes[n].total_reward += reward;
        }
        self.iterations += 1;
    }

    /// Legal actions considered at a node: the transition model's top
    /// `candidate_breadth` when there are more legal heroes than that, else
    /// all of them.
    fn candidates(&mut self, id: NodeId) -> Vec<HeroId> {
        let pos = &self.nodes[id].pos;
        if pos.is_over() {
            return Vec::new();
        }
        let n = pos.series.fill_legal_mask(&pos.draft, &mut self.mask);
        let k = self.config.candidate_breadth;
        match self.models.markov {
            Some(m) if n > k => m
                .top_k(&pos.draft, &self.mask, k)
                .expect("live state with a nonempty mask of the model's size")
                .into_iter()
                .map(|(h, _)| h)
                .collect(),
            _ => self
                .mask
                .iter()
                .enumerate()
                .filter(|(_, &ok)| ok)
                .map(|(i, _)| HeroId::from(i))
                .collect(),
        }
    }

    fn expand(&mut self, id: NodeId) -> Option<NodeId> {
        let untried = self.nodes[id].untried.as_mut().expect("initialised");
        if untried.is_empty() {
            return None;
        }
        let hero = untried.swap_remove(self.rng.random_range(0..untried.len()));
        let mut pos = self.nodes[id].pos.clone();
        pos.play(hero, &self.models);
        let child = self.nodes.len();
        self.nodes.push(SearchNode::new(pos, Some(hero), Some(id)));
        self.nodes[id].children.push(child);
        Some(child)
    }

    fn select(&self, id: NodeId) -> NodeId {
        let node = &self.nodes[id];
        let actor = node.actor.expect("expanded node has an actor");
        let mut best: Option<(f64, HeroId, NodeId)> = None;
        for &c in &node.children {
            let ch = &self.nodes[c];
            let s = uct_score(ch.total_reward, ch.visits, node.visits, self.config.c, actor, self.horizon);
            let h = ch.hero.expect("child has an action");
            best = match best {
                Some((bs, bh, bc)) if bs > s || (bs == s && bh < h) => Some((bs, bh, bc)),
                _ => Some((s, h, c)),
            };
        }
        best.expect("children nonempty").2
    }

    /// Root children ranked by visits (robust child), then mean reward,
    /// then ascending id.
    pub fn recommendation(&self) -> Option<Recommendation> {
        let mut ranked: Vec<RankedAction> = self.nodes[0]
            .children
            .iter()
            .map(|&c| {
                let n = &self.nodes[c];
                RankedAction {
                    hero: n.hero.expect("child has an action"),
                    score: n.q().unwrap_or(0.0),
                    visits: n.visits,
                }
            })
            .collect();
        ranked.sort_by(|a, b| {
            b.visits
                .cmp(&a.visits)
                .then(b.score.total_cmp(&a.score))
                .then(a.hero.cmp(&b.hero))
        });
        let chosen = ranked.first()?.hero;
        Some(Recommendation {
            ranked,
            chosen,
            iterations: self.iterations,
            horizon: self.horizon,
        })
    }
}

/// Runs the search for our team's pending ban or pick.
pub fn recommend(
    series: &SeriesState,
    state: &DraftState,
    models: Models<'_>,
    config: &MctsConfig,
) -> Result<Recommendation> {
    let actor = series.acting_team(state)?;
    if actor != Team::Ours {
        return Err(MctsError::WrongTurn { expected: Team::Ours, actual: actor });
    }
    if series.legal_actions(state)?.is_empty() {
        return Err(MctsError::NoLegalAction);
    }
    let mut tree = SearchTree::new(series, state, models, config)?;
    tree.run(config.iterations);
    Ok(tree.recommendation().expect("at least one child after an iteration"))
}

/// The opponent's `k` most likely next heroes.
pub fn predict_opponent(
    series: &SeriesState,
    state: &DraftState,
    markov: &TransitionModel,
    k: usize,
) -> Result<Vec<(HeroId, f64)>> {
    let actor = series.acting_team(state)?;
    if actor != Team::Theirs {
        return Err(MctsError::WrongTurn { expected: Team::Theirs, actual: actor });
    }
    let mask = series.legal_mask(state)?;
    if !mask.iter().any(|&m| m) {
        return Err(MctsError::NoLegalAction);
    }
    Ok(markov.top_k(state, &mask, k)?)
}
