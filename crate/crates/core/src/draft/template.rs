use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ActionKind, DraftError, Result, Side};
use crate::hash::Fnv1a;

/// One entry of a drafting order: which side acts and whether it bans or picks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub side: Side,
    pub kind: ActionKind,
}

impl Step {
    fn token(self) -> String {
        let k = match self.kind {
            ActionKind::Ban => 'b',
            ActionKind::Pick => 'p',
        };
        format!("{}{}", k, self.side.number())
    }
}

/// Fixed ban/pick order of a round, e.g. `b1-b2-b1-b2-p1-p2-...`.
///
/// Templates built with [`DraftTemplate::parse`] must give each side exactly
/// five picks and the same number of bans. [`DraftTemplate::parse_custom`]
/// relaxes the pick count to any equal, positive number per side, which is
/// what the small search test games use.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TemplateRepr", into = "TemplateRepr")]
pub struct DraftTemplate {
    name: String,
    steps: Vec<Step>,
    picks_per_side: usize,
    bans_per_side: usize,
    fingerprint: u64,
}

#[derive(Serialize, Deserialize)]
struct TemplateRepr {
    name: String,
    sequence: String,
}

impl TryFrom<TemplateRepr> for DraftTemplate {
    type Error = DraftError;

    fn try_from(r: TemplateRepr) -> Result<Self> {
        DraftTemplate::parse_custom(&r.name, &r.sequence)
    }
}

impl From<DraftTemplate> for TemplateRepr {
    fn from(t: DraftTemplate) -> Self {
        TemplateRepr {
            sequence: t.to_string(),
            name: t.name,
        }
    }
}

pub const HOK_SEQUENCE: &str = "b1-b2-b1-b2-p1-p2-p2-p1-p1-p2-b2-b1-b2-b1-p2-p1-p1-p2";
pub const LOL_SEQUENCE: &str = "b1-b2-b1-b2-b1-b2-p1-p2-p2-p1-p1-p2-b2-b1-b2-b1-p2-p1-p1-p2";
pub const DOTA2_SEQUENCE: &str =
    "b1-b2-b1-b2-p1-p2-p2-p1-b1-b2-b1-b2-b1-b2-p2-p1-p1-p2-b1-b2-b1-b2-p1-p2";

/// Number of picks each side makes in a full five-versus-five draft.
pub const PICKS_PER_SIDE: usize = 5;

impl DraftTemplate {
    /// Parses a full tournament template (five picks per side).
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let t = Self::parse_custom(name, text)?;
        if t.picks_per_side != PICKS_PER_SIDE {
            return Err(DraftError::InvalidTemplate(format!(
                "each side must pick exactly {PICKS_PER_SIDE} heroes, found {}",
                t.picks_per_side
            )));
        }
        Ok(t)
    }

    /// Parses a template with any equal number of picks (at least one) and
    /// bans per side.
    pub fn parse_custom(name: &str, text: &str) -> Result<Self> {
        let steps = text
            .split('-')
            .map(parse_token)
            .collect::<Result<Vec<_>>>()?;
        let count = |side, kind| {
            steps
                .iter()
                .filter(|s| s.side == side && s.kind == kind)
                .count()
        };
        let (p1, p2) = (count(Side::Blue, ActionKind::Pick), count(Side::Red, ActionKind::Pick));
        let (b1, b2) = (count(Side::Blue, ActionKind::Ban), count(Side::Red, ActionKind::Ban));
        if p1 != p2 || p1 == 0 {
            return Err(DraftError::InvalidTemplate(format!(
                "pick counts must be equal and positive per side, found {p1} and {p2}"
            )));
        }
        if b1 != b2 {
            return Err(DraftError::InvalidTemplate(format!(
                "ban counts must be equal per side, found {b1} and {b2}"
            )));
        }
        let mut fingerprint = Fnv1a::new();
        for s in &steps {
            fingerprint.write(&[s.side.number(), matches!(s.kind, ActionKind::Pick) as u8]);
        }
        Ok(DraftTemplate {
            name: name.to_string(),
            steps,
            picks_per_side: p1,
            bans_per_side: b1,
            fingerprint: fingerprint.finish(),
        })
    }

    /// King Pro League order.
    pub fn hok() -> Self {
        Self::parse("hok", HOK_SEQUENCE).expect("built-in template")
    }

    pub fn lol() -> Self {
        Self::parse("lol", LOL_SEQUENCE).expect("built-in template")
    }

    pub fn dota2() -> Self {
        Self::parse("dota2", DOTA2_SEQUENCE).expect("built-in template")
    }

    /// Looks up a built-in template by name (`hok`/`kpl`, `lol`, `dota2`).
    pub fn builtin(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "hok" | "kpl" => Some(Self::hok()),
            "lol" => Some(Self::lol()),
            "dota2" | "dota" => Some(Self::dota2()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn step(&self, i: usize) -> Option<Step> {
        self.steps.get(i).copied()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn picks_per_side(&self) -> usize {
        self.picks_per_side
    }

    pub fn bans_per_side(&self) -> usize {
        self.bans_per_side
    }

    /// Stable hash of the step order (the name is not included).
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Heroes consumed by one round (all bans and picks).
    pub fn heroes_per_round(&self) -> usize {
        self.steps.len()
    }
}

fn parse_token(tok: &str) -> Result<Step> {
    let bad = || DraftError::MalformedToken {
        token: tok.to_string(),
    };
    let mut chars = tok.chars();
    let kind = match chars.next() {
        Some('b') => ActionKind::Ban,
        Some('p') => ActionKind::Pick,
        _ => return Err(bad()),
    };
    let side = match chars.next() {
        Some('1') => Side::Blue,
        Some('2') => Side::Red,
        _ => return Err(bad()),
    };
    if chars.next().is_some() {
        return Err(bad());
    }
    Ok(Step { side, kind })
}

impl fmt::Display for DraftTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self.steps.iter().map(|s| s.token()).collect();
        f.write_str(&tokens.join("-"))
    }
}
