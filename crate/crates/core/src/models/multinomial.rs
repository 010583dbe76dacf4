//! The multinomial model on a skeleton tree.
//!
//! The skeleton `T` (with `m` leaves) is extended by a pendant edge above its
//! root, giving `2m - 1` edges. Edge 0 is that root pendant edge; the rest
//! are numbered depth-first over the canonical form, left child first, each
//! edge taking the index of its lower endpoint's visit. A multiset `A` of
//! edges attaches one new leaf per occurrence (repeated edges carry a pendant
//! chain); `T_A` is the shape induced on the new leaves.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::density::ShapeDistribution;
use crate::error::{Error, Result};
use crate::rational::{factorial, format_rational, from_biguint, parse_rational, Rational};
use crate::shapes::{enumerate_shapes, parse_shape, TreeShape};

pub fn edge_count(skeleton: &TreeShape) -> usize {
    2 * skeleton.leaf_count() - 1
}

/// Indices of the edges ending at the skeleton's original leaves, in
/// left-to-right leaf order.
pub fn leaf_edges(skeleton: &TreeShape) -> Vec<usize> {
    fn walk(t: &TreeShape, edge: usize, next: &mut usize, out: &mut Vec<usize>) {
        match t.children() {
            None => out.push(edge),
            Some((l, r)) => {
                let le = bump(next);
                walk(l, le, next, out);
                let re = bump(next);
                walk(r, re, next, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(skeleton, 0, &mut 1, &mut out);
    out
}

fn bump(next: &mut usize) -> usize {
    let e = *next;
    *next += 1;
    e
}

/// A skeleton with a probability vector on the edges of its extended tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultinomialParams {
    skeleton: TreeShape,
    weights: Vec<Rational>,
}

impl MultinomialParams {
    pub fn new(skeleton: TreeShape, weights: Vec<Rational>) -> Result<MultinomialParams> {
        let edges = edge_count(&skeleton);
        if weights.len() != edges {
            return Err(Error::domain(format!(
                "skeleton {} has {edges} edges, got {} weights",
                skeleton,
                weights.len()
            )));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::domain("edge weights must be nonnegative"));
        }
        if !weights.iter().sum::<Rational>().is_one() {
            return Err(Error::domain("edge weights must sum to 1"));
        }
        Ok(MultinomialParams { skeleton, weights })
    }

    pub fn skeleton(&self) -> &TreeShape {
        &self.skeleton
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ParamsFile {
            skeleton: self.skeleton.encoding().to_string(),
            weights: self.weights.iter().map(format_rational).collect(),
        })
        .expect("plain data serializes")
    }

    /// Reads `{skeleton: "<shape>", weights: ["p/q", …]}`.
    pub fn from_json(text: &str) -> Result<MultinomialParams> {
        let file: ParamsFile = serde_json::from_str(text)?;
        let skeleton = parse_shape(&file.skeleton)?;
        let weights = file
            .weights
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        MultinomialParams::new(skeleton, weights)
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    skeleton: String,
    weights: Vec<String>,
}

/// Builds `T_A` for the edge multiset `multiset` (indices may repeat).
pub fn multinomial_build(skeleton: &TreeShape, multiset: &[usize]) -> Result<TreeShape> {
    if multiset.is_empty() {
        return Err(Error::domain("edge multiset must be nonempty"));
    }
    let edges = edge_count(skeleton);
    let mut mult = vec![0usize; edges];
    for &e in multiset {
        if e >= edges {
            return Err(Error::domain(format!(
                "edge index {e} out of range (skeleton has {edges} edges)"
            )));
        }
        mult[e] += 1;
    }
    Ok(build_from_counts(skeleton, &mult).expect("nonempty multiset"))
}

fn build_from_counts(skeleton: &TreeShape, mult: &[usize]) -> Option<TreeShape> {
    fn walk(t: &TreeShape, edge: usize, next: &mut usize, mult: &[usize]) -> Option<TreeShape> {
        let mut below = t.children().and_then(|(l, r)| {
            let le = bump(next);
            let a = walk(l, le, next, mult);
            let re = bump(next);
            let b = walk(r, re, next, mult);
            match (a, b) {
                (Some(a), Some(b)) => Some(TreeShape::node(a, b)),
                (a, b) => a.or(b),
            }
        });
        for _ in 0..mult[edge] {
            below = Some(match below {
                None => TreeShape::leaf(),
                Some(x) => TreeShape::node(TreeShape::leaf(), x),
            });
        }
        below
    }
    walk(skeleton, 0, &mut 1, mult)
}

/// The full distribution of `T_A` over `RB_U(n)` for `n` edges drawn i.i.d.
/// from the weights. Multisets touching a zero-weight edge have probability
/// zero and are skipped.
pub fn multinomial_distribution(params: &MultinomialParams, n: usize) -> Result<ShapeDistribution> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let index = enumerate_shapes(n)?;
    let support: Vec<usize> = (0..params.weights.len())
        .filter(|&e| !params.weights[e].is_zero())
        .collect();
    // powers[s][k] = t_e^k for the s-th support edge
    let powers: Vec<Vec<Rational>> = support
        .iter()
        .map(|&e| {
            let mut row = vec![Rational::one()];
            for k in 1..=n {
                row.push(&row[k - 1] * &params.weights[e]);
            }
            row
        })
        .collect();
    let facts: Vec<BigUint> = (0..=n as u64).map(factorial).collect();
    let mut probs = vec![Rational::zero(); index.len()];
    let mut mult = vec![0usize; params.weights.len()];
    let mut counts = vec![0usize; support.len()];
    let mut visit = |counts: &[usize]| {
        let mut denom = BigUint::one();
        let mut mass = from_biguint(&facts[n]);
        for (s, &k) in counts.iter().enumerate() {
            mult[support[s]] = k;
            denom *= &facts[k];
            mass *= &powers[s][k];
        }
        mass /= from_biguint(&denom);
        let shape = build_from_counts(&params.skeleton, &mult).expect("n >= 1 leaves");
        probs[index.position(&shape).expect("T_A has n leaves")] += mass;
    };
    compositions(&mut counts, 0, n, &mut visit);
    ShapeDistribution::new(n, probs)
}

// Visits every way of writing `remaining` as an ordered sum over counts[pos..].
fn compositions(counts: &mut [usize], pos: usize, remaining: usize, f: &mut impl FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        f(counts);
        return;
    }
    for k in (0..=remaining).rev() {
        counts[pos] = k;
        compositions(counts, pos + 1, remaining - k, f);
    }
    counts[pos] = 0;
}

/// Probability that the model produces shape `s`; zero unless `s` has `n` leaves.
pub fn multinomial_prob(params: &MultinomialParams, s: &TreeShape, n: usize) -> Result<Rational> {
    Ok(multinomial_distribution(params, n)?.prob(s))
}

/// Weight `1/m` on each of the `m` original leaf edges and zero elsewhere.
pub fn dm_construction(t: &TreeShape) -> Result<MultinomialParams> {
    let m = t.leaf_count();
    if m < 2 {
        return Err(Error::domain("construction needs a skeleton with at least 2 leaves"));
    }
    let share = Rational::new(1.into(), (m as i64).into());
    let mut weights = vec![Rational::zero(); edge_count(t)];
    for e in leaf_edges(t) {
        weights[e] = share.clone();
    }
    MultinomialParams::new(t.clone(), weights)
}
