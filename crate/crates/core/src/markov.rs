//! Opponent ban/pick prediction from historical drafts.
//!
//! Each observed step is a transition from the draft state before the step to
//! the state after it, so the transition counts for a state are counts of the
//! hero taken next. The probability of `s -> s'` is `N(s, s') / N(s)`.
//!
//! A 110-slot state is almost never seen twice in a few thousand drafts, so
//! counts are kept at three context levels and prediction falls back from the
//! most specific level that has data:
//!
//! 1. `FullState`: the exact slot array at this step.
//! 2. `StagePlusOwnPicks`: the step index plus the acting side's picks so far.
//! 3. `StageOnly`: the step index.
//!
//! With smoothing `alpha`, a hero in the legal mask gets
//! `(count + alpha) / (masked_total + alpha * |mask|)` and every hero outside
//! the mask gets exactly zero.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::draft::{
    DraftError, DraftState, DraftTemplate, GlobalBpPolicy, HeroId, SeriesState,
};
use crate::hash::Fnv1a;

pub const FORMAT_NAME: &str = "draftcoach-markov";
pub const FORMAT_VERSION: u32 = 1;

/// Default Laplace smoothing constant.
pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug, Error)]
pub enum MarkovError {
    #[error("cannot fit a transition model on an empty corpus")]
    EmptyCorpus,
    #[error("legal mask is empty")]
    EmptyMask,
    #[error("mask has {got} entries, model pool has {expected}")]
    MaskSize { expected: usize, got: usize },
    #[error("sequence {index} is illegal: {source}")]
    IllegalSequence {
        index: usize,
        #[source]
        source: DraftError,
    },
    #[error("sequence {index} has {len} steps but its template has {max}")]
    SequenceTooLong { index: usize, len: usize, max: usize },
    #[error(transparent)]
    Draft(#[from] DraftError),
    #[error("invalid model artifact: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = MarkovError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContextLevel {
    FullState,
    StagePlusOwnPicks,
    StageOnly,
}

impl ContextLevel {
    pub const ALL: [ContextLevel; 3] = [
        ContextLevel::FullState,
        ContextLevel::StagePlusOwnPicks,
        ContextLevel::StageOnly,
    ];

    fn tag(self) -> u8 {
        match self {
            ContextLevel::FullState => 0,
            ContextLevel::StagePlusOwnPicks => 1,
            ContextLevel::StageOnly => 2,
        }
    }
}

/// Hashed projection of a draft state at one context level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ContextKey {
    pub level: ContextLevel,
    pub payload: u64,
}

impl ContextKey {
    /// Key of a non-terminal state. Terminal states have no next step and
    /// only make sense at `FullState`/`StageOnly`; their `StagePlusOwnPicks`
    /// projection uses side 0.
    pub fn of(level: ContextLevel, state: &DraftState) -> ContextKey {
        let mut h = Fnv1a::new();
        h.write(&[level.tag()]);
        h.write_u64(state.template().fingerprint());
        h.write_u64(state.cursor() as u64);
        match level {
            ContextLevel::FullState => {
                h.write_u64(state.pool_size() as u64);
                let bytes: Vec<u8> = state.slots().iter().map(|&s| s as u8).collect();
                h.write(&bytes);
            }
            ContextLevel::StagePlusOwnPicks => {
                let side = state.current_actor().map(|s| s.side.number()).unwrap_or(0);
                h.write(&[side]);
                for (i, &s) in state.slots().iter().enumerate() {
                    if s > 0 && s as u8 == side {
                        h.write(&(i as u16).to_le_bytes());
                    }
                }
            }
            ContextLevel::StageOnly => {}
        }
        ContextKey {
            level,
            payload: h.finish(),
        }
    }
}

/// Next-hero counts observed in one context, sorted by hero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextCounts {
    total: u64,
    counts: Vec<(HeroId, u64)>,
}

impl ContextCounts {
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, hero: HeroId) -> u64 {
        match self.counts.binary_search_by_key(&hero, |&(h, _)| h) {
            Ok(i) => self.counts[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (HeroId, u64)> + '_ {
        self.counts.iter().copied()
    }

    fn add(&mut self, hero: HeroId) {
        match self.counts.binary_search_by_key(&hero, |&(h, _)| h) {
            Ok(i) => self.counts[i].1 += 1,
            Err(i) => self.counts.insert(i, (hero, 1)),
        }
        self.total += 1;
    }

    fn masked_total(&self, mask: &[bool]) -> u64 {
        self.counts
            .iter()
            .filter(|(h, _)| mask[h.index()])
            .map(|&(_, c)| c)
            .sum()
    }
}

/// A recorded round: its template and the heroes taken in step order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DraftSequence {
    pub template: Arc<DraftTemplate>,
    pub heroes: Vec<HeroId>,
}

impl DraftSequence {
    pub fn new(template: Arc<DraftTemplate>, heroes: Vec<HeroId>) -> Self {
        DraftSequence { template, heroes }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovConfig {
    pub alpha: f64,
    /// Context levels tried in order during prediction.
    pub fallback_order: Vec<ContextLevel>,
    pub pool_size: usize,
}

impl Default for MarkovConfig {
    fn default() -> Self {
        MarkovConfig {
            alpha: DEFAULT_ALPHA,
            fallback_order: ContextLevel::ALL.to_vec(),
            pool_size: crate::draft::DEFAULT_POOL_SIZE,
        }
    }
}

/// Fitted transition counts.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionModel {
    config: MarkovConfig,
    contexts: HashMap<ContextKey, ContextCounts>,
}

impl TransitionModel {
    /// Model with no observations.
    pub fn empty(config: MarkovConfig) -> Self {
        TransitionModel {
            config,
            contexts: HashMap::new(),
        }
    }

    /// Counts every transition of every sequence at all context levels.
    pub fn fit(corpus: &[DraftSequence], config: MarkovConfig) -> Result<Self> {
        if corpus.is_empty() {
            return Err(MarkovError::EmptyCorpus);
        }
        let mut model = Self::empty(config);
        for (i, seq) in corpus.iter().enumerate() {
            model.observe(i, seq)?;
        }
        Ok(model)
    }

    /// Adds one sequence to the counts.
    pub fn update(&mut self, seq: &DraftSequence) -> Result<()> {
        self.observe(0, seq)
    }

    fn observe(&mut self, index: usize, seq: &DraftSequence) -> Result<()> {
        if seq.heroes.len() > seq.template.len() {
            return Err(MarkovError::SequenceTooLong {
                index,
                len: seq.heroes.len(),
                max: seq.template.len(),
            });
        }
        // replay first so an illegal sequence leaves the counts untouched
        let series = SeriesState::new(
            seq.template.clone(),
            self.config.pool_size,
            1,
            GlobalBpPolicy::EitherTeam,
        )
        .map_err(|source| MarkovError::IllegalSequence { index, source })?;
        let mut state = series.new_round();
        let mut keys = Vec::with_capacity(seq.heroes.len());
        for &hero in &seq.heroes {
            let level_keys: Vec<ContextKey> = ContextLevel::ALL
                .iter()
                .map(|&l| ContextKey::of(l, &state))
                .collect();
            state = series
                .apply_action(&state, hero)
                .map_err(|source| MarkovError::IllegalSequence { index, source })?;
            keys.push((level_keys, hero));
        }
        for (level_keys, hero) in keys {
            for k in level_keys {
                self.contexts.entry(k).or_default().add(hero);
            }
        }
        Ok(())
    }

    pub fn config(&self) -> &MarkovConfig {
        &self.config
    }

    pub fn alpha(&self) -> f64 {
        self.config.alpha
    }

    pub fn pool_size(&self) -> usize {
        self.config.pool_size
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.config.alpha = alpha;
        self
    }

    pub fn context(&self, key: &ContextKey) -> Option<&ContextCounts> {
        self.contexts.get(key)
    }

    pub fn context_count(&self) -> usize {
        self.contexts.len()
    }

    fn check_mask(&self, mask: &[bool]) -> Result<usize> {
        if mask.len() != self.config.pool_size {
            return Err(MarkovError::MaskSize {
                expected: self.config.pool_size,
                got: mask.len(),
            });
        }
        let n = mask.iter().filter(|&&m| m).count();
        if n == 0 {
            return Err(MarkovError::EmptyMask);
        }
        Ok(n)
    }

    /// Deepest fallback level with observations inside the mask.
    fn select_context(
        &self,
        state: &DraftState,
        mask: &[bool],
    ) -> Option<(ContextLevel, &ContextCounts, u64)> {
        self.config.fallback_order.iter().find_map(|&level| {
            let c = self.contexts.get(&ContextKey::of(level, state))?;
            let t = c.masked_total(mask);
            (t > 0).then_some((level, c, t))
        })
    }

    /// Next-step distribution over the whole pool together with the context
    /// level it came from (`None` when no level has data and the result is
    /// uniform over the mask).
    pub fn predict_with_level(
        &self,
        state: &DraftState,
        mask: &[bool],
    ) -> Result<(Vec<f64>, Option<ContextLevel>)> {
        let n_mask = self.check_mask(mask)?;
        state.current_actor()?;
        let alpha = self.config.alpha;
        let mut p = vec![0.0; mask.len()];
        let chosen = self.select_context(state, mask);
        let (level, counts, total) = match chosen {
            Some((l, c, t)) => (Some(l), Some(c), t),
            None => (None, None, 0),
        };
        let denom = total as f64 + alpha * n_mask as f64;
        for (h, &ok) in mask.iter().enumerate() {
            if !ok {
                continue;
            }
            p[h] = if denom > 0.0 {
                let c = counts.map_or(0, |c| c.count(HeroId::from(h))) as f64;
                (c + alpha) / denom
            } else {
                1.0 / n_mask as f64
            };
        }
        Ok((p, level))
    }

    /// Probability of each hero being taken at the pending step, restricted
    /// to `mask` and renormalised over it.
    pub fn predict_distribution(&self, state: &DraftState, mask: &[bool]) -> Result<Vec<f64>> {
        Ok(self.predict_with_level(state, mask)?.0)
    }

    /// The `k` most likely heroes, descending by probability with ties broken
    /// by ascending hero id.
    pub fn top_k(&self, state: &DraftState, mask: &[bool], k: usize) -> Result<Vec<(HeroId, f64)>> {
        let p = self.predict_distribution(state, mask)?;
        Ok(top_k_of(&p, mask, k))
    }

    /// Draws the next hero from the predicted distribution without building
    /// the full probability vector. Returns `None` for an empty mask.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        state: &DraftState,
        mask: &[bool],
        rng: &mut R,
    ) -> Option<HeroId> {
        let n_mask = mask.iter().filter(|&&m| m).count();
        if n_mask == 0 || state.is_terminal() {
            return None;
        }
        let alpha = self.config.alpha;
        let (counts, total) = match self.select_context(state, mask) {
            Some((_, c, t)) => (Some(c), t),
            None => (None, 0),
        };
        let denom = total as f64 + alpha * n_mask as f64;
        if denom <= 0.0 {
            return uniform_from_mask(mask, n_mask, rng);
        }
        let mut u = rng.random::<f64>() * denom;
        let mut last = None;
        let mut it = counts.map(|c| c.counts.iter().peekable());
        for (h, &ok) in mask.iter().enumerate() {
            let hero = HeroId::from(h);
            let mut c = 0u64;
            if let Some(it) = it.as_mut() {
                while let Some(&&(ch, cc)) = it.peek() {
                    if ch < hero {
                        it.next();
                    } else {
                        if ch == hero {
                            c = cc;
                        }
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let w = c as f64 + alpha;
            if w <= 0.0 {
                continue;
            }
            last = Some(hero);
            if u < w {
                return Some(hero);
            }
            u -= w;
        }
        last
    }

    /// Serialises to the versioned JSON artifact (documented in
    /// `docs/model-formats.md`).
    pub fn to_json(&self) -> Result<String> {
        let mut contexts: Vec<ContextRecord> = self
            .contexts
            .iter()
            .map(|(k, c)| ContextRecord {
                level: k.level,
                key: format!("{:016x}", k.payload),
                total: c.total,
                counts: c.counts.iter().map(|&(h, n)| (h.0, n)).collect(),
            })
            .collect();
        contexts.sort_by(|a, b| (a.level, &a.key).cmp(&(b.level, &b.key)));
        let art = ModelArtifact {
            format: FORMAT_NAME.to_string(),
            version: FORMAT_VERSION,
            pool_size: self.config.pool_size,
            alpha: self.config.alpha,
            fallback_order: self.config.fallback_order.clone(),
            contexts,
        };
        Ok(serde_json::to_string(&art)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let art: ModelArtifact = serde_json::from_str(text)?;
        if art.format != FORMAT_NAME {
            return Err(MarkovError::Format(format!("unexpected format `{}`", art.format)));
        }
        if art.version != FORMAT_VERSION {
            return Err(MarkovError::Format(format!("unsupported version {}", art.version)));
        }
        let mut contexts = HashMap::with_capacity(art.contexts.len());
        for rec in art.contexts {
            let payload = u64::from_str_radix(&rec.key, 16)
                .map_err(|_| MarkovError::Format(format!("bad context key `{}`", rec.key)))?;
            let mut counts: BTreeMap<u16, u64> = BTreeMap::new();
            for (h, n) in rec.counts {
                if h as usize >= art.pool_size {
                    return Err(MarkovError::Format(format!("hero {h} outside pool")));
                }
                *counts.entry(h).or_default() += n;
            }
            let sum: u64 = counts.values().sum();
            if sum != rec.total {
                return Err(MarkovError::Format(format!(
                    "context {} counts sum to {sum}, total says {}",
                    rec.key, rec.total
                )));
            }
            contexts.insert(
                ContextKey {
                    level: rec.level,
                    payload,
                },
                ContextCounts {
                    total: rec.total,
                    counts: counts.into_iter().map(|(h, n)| (HeroId(h), n)).collect(),
                },
            );
        }
        Ok(TransitionModel {
            config: MarkovConfig {
                alpha: art.alpha,
                fallback_order: art.fallback_order,
                pool_size: art.pool_size,
            },
            contexts,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

fn uniform_from_mask<R: Rng + ?Sized>(mask: &[bool], n: usize, rng: &mut R) -> Option<HeroId> {
    let k = rng.random_range(0..n);
    mask.iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .nth(k)
        .map(|(i, _)| HeroId::from(i))
}

/// Top `k` entries of a probability vector restricted to `mask`.
pub fn top_k_of(p: &[f64], mask: &[bool], k: usize) -> Vec<(HeroId, f64)> {
    let mut v: Vec<(HeroId, f64)> = p
        .iter()
        .enumerate()
        .filter(|(i, _)| mask[*i])
        .map(|(i, &x)| (HeroId::from(i), x))
        .collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    v.truncate(k);
    v
}

#[derive(Serialize, Deserialize)]
struct ContextRecord {
    level: ContextLevel,
    key: String,
    total: u64,
    counts: Vec<(u16, u64)>,
}

#[derive(Serialize, Deserialize)]
struct ModelArtifact {
    format: String,
    version: u32,
    pool_size: usize,
    alpha: f64,
    fallback_order: Vec<ContextLevel>,
    contexts: Vec<ContextRecord>,
}
