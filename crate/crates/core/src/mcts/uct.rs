use crate::draft::{HeroId, Team};

use super::{MctsError, Result};

/// Statistics of one expanded child as seen by the selection rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChildStats {
    pub hero: HeroId,
    pub visits: u64,
    /// Accumulated reward, our team's perspective.
    pub total_reward: f64,
}

/// UCT value of a child: the mean reward from the acting team's point of
/// view plus `c * sqrt(ln t / n)`. For the opponent the mean is
/// `horizon - Q`, the rounds our team does not win.
pub fn uct_score(
    total_reward: f64,
    visits: u64,
    parent_visits: u64,
    c: f64,
    actor: Team,
    horizon: f64,
) -> f64 {
    let n = visits as f64;
    let q = total_reward / n;
    let q = match actor {
        Team::Ours => q,
        Team::Theirs => horizon - q,
    };
    q + c * ((parent_visits as f64).ln() / n).sqrt()
}

/// Child maximising [`uct_score`]; equal scores go to the lower hero id.
pub fn uct_select(
    children: &[ChildStats],
    parent_visits: u64,
    c: f64,
    actor: Team,
    horizon: f64,
) -> Result<HeroId> {
    if children.is_empty() {
        return Err(MctsError::Unexpanded);
    }
    let mut best: Option<(f64, HeroId)> = None;
    for ch in children {
        if ch.visits == 0 {
            return Err(MctsError::UnvisitedChild { hero: ch.hero });
        }
        let s = uct_score(ch.total_reward, ch.visits, parent_visits, c, actor, horizon);
        best = match best {
            Some((bs, bh)) if bs > s || (bs == s && bh < ch.hero) => Some((bs, bh)),
            _ => Some((s, ch.hero)),
        };
    }
    Ok(best.expect("nonempty").1)
}
