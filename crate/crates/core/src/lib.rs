//! Draft decision support for best-of-N MOBA series played under the global
//! ban/pick rule.
//!
//! * [`draft`] encodes templates, round state and series rules.
//! * [`markov`] predicts the opponent's next ban or pick from past drafts.
//! * [`winrate`] trains round outcome predictors (random forest, logistic).
//! * [`mcts`] searches the remaining draft and rounds for our best action.
//! * [`analytics`] aggregates match logs into hero, player and team views.
//! * [`data`] holds the match-log schema and a synthetic league generator.

pub mod draft;
pub mod markov;
pub mod winrate;
pub mod data;
pub mod mcts;
pub mod analytics;

pub mod hash;
