use super::{DraftState, HeroId, Side};

/// Predictor input for a (possibly partial) draft: blue pick indicators
/// followed by red pick indicators, `2 * pool_size` entries. Bans are not
/// encoded.
pub fn encode_features(state: &DraftState) -> Vec<f64> {
    let h = state.pool_size();
    let mut x = vec![0.0; 2 * h];
    for (i, &s) in state.slots().iter().enumerate() {
        match Side::from_number(s.max(0) as u8) {
            Some(Side::Blue) => x[i] = 1.0,
            Some(Side::Red) => x[h + i] = 1.0,
            None => {}
        }
    }
    x
}

/// Same layout as [`encode_features`] built from explicit pick lists.
pub fn encode_picks(blue: &[HeroId], red: &[HeroId], pool_size: usize) -> Vec<f64> {
    let mut x = vec![0.0; 2 * pool_size];
    for h in blue {
        x[h.index()] = 1.0;
    }
    for h in red {
        x[pool_size + h.index()] = 1.0;
    }
    x
}
