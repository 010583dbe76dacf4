//! Parametric families of exchangeable, sampling consistent distributions:
//! Markov branching models (with the beta-splitting family as the main
//! instance) and the multinomial model on a skeleton tree.

mod beta;
mod markov;
mod multinomial;
mod poly;

pub use beta::{beta_q, BetaParam};
pub use markov::{
    beta_distribution, beta_rule, beta_rules, consistent_rules, derive_lower_rule,
    markov_branching_distribution, SplittingRule,
};
pub use multinomial::{
    dm_construction, edge_count, leaf_edges, multinomial_build, multinomial_distribution,
    multinomial_prob, MultinomialParams,
};
pub use poly::Polynomial;
