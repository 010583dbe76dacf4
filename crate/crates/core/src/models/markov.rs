use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::beta::{beta_q, BetaParam};
use crate::density::ShapeDistribution;
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::shapes::{enumerate_shapes, TreeShape};

/// A symmetric split distribution `q_n(1), …, q_n(n-1)` for one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingRule {
    n: usize,
    q: Vec<Rational>,
}

impl SplittingRule {
    /// `q[i - 1]` is the probability that `i` of the `n` leaves go to one side.
    pub fn new(n: usize, q: Vec<Rational>) -> Result<SplittingRule> {
        if n < 2 {
            return Err(Error::domain("splitting rules start at level 2"));
        }
        if q.len() != n - 1 {
            return Err(Error::domain(format!(
                "level-{n} rule needs {} entries, got {}",
                n - 1,
                q.len()
            )));
        }
        if q.iter().any(Signed::is_negative) {
            return Err(Error::domain("split probabilities must be nonnegative"));
        }
        if q.iter().zip(q.iter().rev()).any(|(a, b)| a != b) {
            return Err(Error::domain("split rule must satisfy q(i) = q(n - i)"));
        }
        if !q.iter().sum::<Rational>().is_one() {
            return Err(Error::domain("split probabilities must sum to 1"));
        }
        Ok(SplittingRule { n, q })
    }

    pub fn uniform(n: usize) -> Result<SplittingRule> {
        if n < 2 {
            return Err(Error::domain("splitting rules start at level 2"));
        }
        let p = Rational::new(1.into(), (n as i64 - 1).into());
        SplittingRule::new(n, vec![p; n - 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `q_n(i)` for `1 <= i <= n - 1`.
    pub fn q(&self, i: usize) -> &Rational {
        &self.q[i - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.q
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RuleFile {
            n: self.n,
            q: self.q.iter().map(format_rational).collect(),
        })
        .expect("plain data serializes")
    }

    /// Reads `{n: int, q: ["p/q", …]}`.
    pub fn from_json(text: &str) -> Result<SplittingRule> {
        let file: RuleFile = serde_json::from_str(text)?;
        let q = file
            .q
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        SplittingRule::new(file.n, q)
    }
}

#[derive(Serialize, Deserialize)]
struct RuleFile {
    n: usize,
    q: Vec<String>,
}

/// The level `n - 1` rule forced by sampling consistency:
/// `q_{n-1}(i) = ((n - i) q_n(i) + (i + 1) q_n(i + 1)) / (n - 2 q_n(1))`.
pub fn derive_lower_rule(rule: &SplittingRule) -> Result<SplittingRule> {
    let n = rule.n();
    if n < 3 {
        return Err(Error::domain("no lower rule below level 2"));
    }
    let nn = int(n as i64);
    let den = &nn - int(2) * rule.q(1);
    if den.is_zero() {
        return Err(Error::domain("degenerate rule: n - 2 q_n(1) = 0"));
    }
    let q = (1..n - 1)
        .map(|i| {
            (int((n - i) as i64) * rule.q(i) + int(i as i64 + 1) * rule.q(i + 1)) / &den
        })
        .collect();
    SplittingRule::new(n - 1, q)
}

/// The rules for levels `2..=top.n()` obtained by repeatedly applying
/// [`derive_lower_rule`], lowest level first.
pub fn consistent_rules(top: &SplittingRule) -> Result<Vec<SplittingRule>> {
    let mut rules = vec![top.clone()];
    while rules.last().expect("nonempty").n() > 2 {
        let lower = derive_lower_rule(rules.last().expect("nonempty"))?;
        rules.push(lower);
    }
    rules.reverse();
    Ok(rules)
}

pub fn beta_rule(n: usize, beta: &BetaParam) -> Result<SplittingRule> {
    if n < 2 {
        return Err(Error::domain("splitting rules start at level 2"));
    }
    let q = (1..n).map(|i| beta_q(n, i, beta)).collect::<Result<Vec<_>>>()?;
    SplittingRule::new(n, q)
}

/// Beta-splitting rules for levels `2..=n`.
pub fn beta_rules(n: usize, beta: &BetaParam) -> Result<Vec<SplittingRule>> {
    (2..=n).map(|k| beta_rule(k, beta)).collect()
}

/// The beta-splitting distribution on `n`-leaf shapes.
pub fn beta_distribution(n: usize, beta: &BetaParam) -> Result<ShapeDistribution> {
    if n == 0 {
        return Err(Error::domain("shapes need at least one leaf"));
    }
    if n == 1 {
        return Ok(ShapeDistribution::point_mass(&TreeShape::leaf()));
    }
    markov_branching_distribution(&beta_rules(n, beta)?)
}

/// Shape probabilities of the Markov branching model with one rule per level
/// `2..=n` (any order; `n` is the highest level supplied).
///
/// A node splitting `k` leaves into children `A`, `B` with `|A| <= |B|`
/// contributes `c · q_k(|A|) · P(A) · P(B)`, where `c = 1` when `A` and `B`
/// are the same shape and `c = 2` otherwise.
pub fn markov_branching_distribution(rules: &[SplittingRule]) -> Result<ShapeDistribution> {
    let mut by_level: BTreeMap<usize, &SplittingRule> = BTreeMap::new();
    for r in rules {
        if by_level.insert(r.n(), r).is_some() {
            return Err(Error::domain(format!("duplicate rule for level {}", r.n())));
        }
    }
    let n = *by_level
        .keys()
        .next_back()
        .ok_or_else(|| Error::domain("no splitting rules supplied"))?;
    if let Some(missing) = (2..=n).find(|k| !by_level.contains_key(k)) {
        return Err(Error::domain(format!("missing splitting rule for level {missing}")));
    }
    // probs[k] holds P over RB_U(k) in canonical order
    let mut probs: Vec<Vec<Rational>> = vec![vec![], vec![Rational::one()]];
    for k in 2..=n {
        let index = enumerate_shapes(k)?;
        let rule = by_level[&k];
        let level: Vec<Rational> = index
            .iter()
            .map(|t| {
                let (a, b) = t.children().expect("k >= 2");
                let pa = &probs[a.leaf_count()][position(a)];
                let pb = &probs[b.leaf_count()][position(b)];
                let small = a.leaf_count().min(b.leaf_count());
                let c = if a == b { int(1) } else { int(2) };
                c * rule.q(small) * pa * pb
            })
            .collect();
        probs.push(level);
    }
    let top = probs.pop().expect("n >= 2");
    Ok(ShapeDistribution::new(n, top).expect("Markov branching probabilities are normalized"))
}

fn position(t: &TreeShape) -> usize {
    enumerate_shapes(t.leaf_count())
        .expect("leaf_count >= 1")
        .position(t)
        .expect("canonical shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn four_leaf_markov() {
        for b in [ratio(0, 1), ratio(1, 1), ratio(-1, 1), ratio(7, 3)] {
            let beta = BetaParam::finite(b).unwrap();
            let d = beta_distribution(4, &beta).unwrap();
            assert_eq!(d.probs()[0], int(2) * beta_q(4, 1, &beta).unwrap());
            assert_eq!(d.probs()[1], beta_q(4, 2, &beta).unwrap());
        }
        let d = beta_distribution(4, &BetaParam::finite(int(0)).unwrap()).unwrap();
        assert_eq!(d.probs(), [ratio(2, 3), ratio(1, 3)]);
    }

    #[test]
    fn three_leaf_is_always_comb() {
        for beta in [BetaParam::Infinity, BetaParam::CombLimit] {
            assert_eq!(beta_distribution(3, &beta).unwrap().probs(), [int(1)]);
        }
    }

    #[test]
    fn five_leaf_infinity_point() {
        let d = beta_distribution(5, &BetaParam::Infinity).unwrap();
        assert_eq!(d.probs(), [ratio(4, 21), ratio(1, 7), ratio(2, 3)]);
        let d = beta_distribution(5, &BetaParam::CombLimit).unwrap();
        assert_eq!(d.probs(), [int(1), int(0), int(0)]);
    }

    #[test]
    fn lower_rules_of_beta_are_beta() {
        for b in [ratio(0, 1), ratio(1, 1), ratio(-1, 1), ratio(-3, 2)] {
            let beta = BetaParam::finite(b).unwrap();
            for n in 4..=8 {
                assert_eq!(
                    derive_lower_rule(&beta_rule(n, &beta).unwrap()).unwrap(),
                    beta_rule(n - 1, &beta).unwrap()
                );
            }
        }
    }

    #[test]
    fn uniform_split_is_a_fixed_point() {
        // the uniform split is the beta = 0 rule, so consistency preserves it
        for n in 3..=10 {
            assert_eq!(
                derive_lower_rule(&SplittingRule::uniform(n).unwrap()).unwrap(),
                SplittingRule::uniform(n - 1).unwrap()
            );
        }
        let skewed = SplittingRule::new(5, vec![int(0), ratio(1, 2), ratio(1, 2), int(0)]).unwrap();
        let lower = derive_lower_rule(&skewed).unwrap();
        assert_eq!(lower.values(), [ratio(1, 5), ratio(3, 5), ratio(1, 5)]);
    }

    #[test]
    fn rule_validation() {
        assert!(SplittingRule::new(4, vec![ratio(1, 2), int(0), ratio(1, 2)]).is_ok());
        assert!(SplittingRule::new(4, vec![ratio(1, 2), ratio(1, 2), int(0)]).is_err());
        assert!(SplittingRule::new(4, vec![ratio(1, 2), ratio(1, 2)]).is_err());
        assert!(SplittingRule::new(3, vec![ratio(1, 3), ratio(1, 3)]).is_err());
        assert!(SplittingRule::new(3, vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        assert!(SplittingRule::new(1, vec![]).is_err());
        assert!(derive_lower_rule(&SplittingRule::new(2, vec![int(1)]).unwrap()).is_err());
    }

    #[test]
    fn missing_or_duplicate_levels() {
        let beta = BetaParam::finite(int(1)).unwrap();
        let mut rules = beta_rules(5, &beta).unwrap();
        rules.remove(1);
        assert!(markov_branching_distribution(&rules).is_err());
        let mut rules = beta_rules(4, &beta).unwrap();
        rules.push(rules[0].clone());
        assert!(markov_branching_distribution(&rules).is_err());
        assert!(markov_branching_distribution(&[]).is_err());
        let mut rules = beta_rules(6, &beta).unwrap();
        rules.reverse();
        assert_eq!(
            markov_branching_distribution(&rules).unwrap(),
            beta_distribution(6, &beta).unwrap()
        );
    }

    #[test]
    fn consistent_rules_from_top() {
        let beta = BetaParam::finite(ratio(1, 2)).unwrap();
        let rules = consistent_rules(&beta_rule(7, &beta).unwrap()).unwrap();
        assert_eq!(rules, beta_rules(7, &beta).unwrap());
    }

    #[test]
    fn rule_json() {
        let r = beta_rule(5, &BetaParam::Infinity).unwrap();
        let back = SplittingRule::from_json(&r.to_json().to_string()).unwrap();
        assert_eq!(back, r);
        assert!(SplittingRule::from_json(r#"{"n":3,"q":["1/3","1/3"]}"#).is_err());
    }
}
