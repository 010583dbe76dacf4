//! Counting induced patterns: how many `n`-subsets of a shape's leaves
//! restrict to each `n`-leaf shape.
//!
//! Two independent routes exist. The scan restricts every subset; the
//! dynamic program walks the tree bottom-up, keeping for every node the
//! number of selected-leaf sets of size at most `n` below it, keyed by their
//! induced shape. [`pattern_counts`] dispatches on the scan cap.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigUint;

use super::enumerate::enumerate_shapes;
use super::restrict::restrict_sorted;
use super::tree::TreeShape;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::rational::{binomial_u128, factorial};

/// Number of internal nodes whose two subtrees are the same shape.
pub fn symmetric_nodes(t: &TreeShape) -> u32 {
    match t.children() {
        None => 0,
        Some((l, r)) => u32::from(l == r) + symmetric_nodes(l) + symmetric_nodes(r),
    }
}

/// Number of leaf-labelled trees with shape `t`: `n! / 2^s` where `s` counts
/// the symmetric internal nodes.
pub fn labeling_count(t: &TreeShape) -> BigUint {
    factorial(t.leaf_count() as u64) >> symmetric_nodes(t)
}

/// Counts per `n`-leaf shape (in canonical order), by exhaustive subset scan.
pub fn pattern_counts_scan(t: &TreeShape, n: usize) -> Result<Vec<u128>> {
    let index = enumerate_shapes(n)?;
    let mut counts = vec![0u128; index.len()];
    if n > t.leaf_count() {
        return Ok(counts);
    }
    for subset in (0..t.leaf_count()).combinations(n) {
        let shape = restrict_sorted(t, &subset, 0).expect("nonempty subset");
        let pos = index
            .position(&shape)
            .expect("restriction has the requested size");
        counts[pos] += 1;
    }
    Ok(counts)
}

/// Counts per `n`-leaf shape (in canonical order), by dynamic programming.
pub fn pattern_counts_dp(t: &TreeShape, n: usize) -> Result<Vec<u128>> {
    let index = enumerate_shapes(n)?;
    let mut memo: HashMap<TreeShape, HashMap<TreeShape, u128>> = HashMap::new();
    let table = dp_table(t, n, &mut memo);
    let mut counts = vec![0u128; index.len()];
    for (shape, c) in &table {
        if shape.leaf_count() == n {
            counts[index.position(shape).expect("pattern of size n")] += c;
        }
    }
    Ok(counts)
}

// For the subtree `t`: induced shape -> number of leaf subsets of size <= n
// below `t` inducing it. Identical subtrees share one table.
fn dp_table<'a>(
    t: &TreeShape,
    n: usize,
    memo: &'a mut HashMap<TreeShape, HashMap<TreeShape, u128>>,
) -> HashMap<TreeShape, u128> {
    if let Some(table) = memo.get(t) {
        return table.clone();
    }
    let table = match t.children() {
        None => HashMap::from([(TreeShape::leaf(), 1u128)]),
        Some((l, r)) => {
            let left = dp_table(l, n, memo);
            let right = dp_table(r, n, memo);
            let mut out = left.clone();
            for (shape, c) in &right {
                *out.entry(shape.clone()).or_insert(0) += c;
            }
            for (a, ca) in &left {
                for (b, cb) in &right {
                    if a.leaf_count() + b.leaf_count() <= n {
                        *out.entry(TreeShape::node(a.clone(), b.clone())).or_insert(0) += ca * cb;
                    }
                }
            }
            out
        }
    };
    memo.insert(t.clone(), table.clone());
    table
}

/// Counts per `n`-leaf shape, scanning when `C(m, n)` is within
/// `caps.max_scan` and using the dynamic program otherwise.
pub fn pattern_counts(t: &TreeShape, n: usize, caps: &Caps) -> Result<Vec<u128>> {
    if n == 0 {
        return Err(Error::domain("pattern size must be at least 1"));
    }
    let subsets = binomial_u128(t.leaf_count() as u64, n as u64);
    match subsets {
        Some(s) if s <= caps.max_scan => pattern_counts_scan(t, n),
        _ => pattern_counts_dp(t, n),
    }
}

/// Number of `|p|`-subsets of the leaves of `t` whose restriction is `p`.
pub fn count_pattern(t: &TreeShape, p: &TreeShape) -> u128 {
    count_pattern_with(t, p, &Caps::default())
}

pub fn count_pattern_with(t: &TreeShape, p: &TreeShape, caps: &Caps) -> u128 {
    let n = p.leaf_count();
    if n > t.leaf_count() {
        return 0;
    }
    let index = enumerate_shapes(n).expect("n >= 1");
    let pos = index.position(p).expect("canonical shape is enumerated");
    pattern_counts(t, n, caps).expect("n >= 1")[pos]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{build_bicomb, build_comb, build_complete, parse_shape};

    #[test]
    fn labeling_counts_small() {
        assert_eq!(labeling_count(&build_comb(4).unwrap()), BigUint::from(12u32));
        assert_eq!(labeling_count(&build_complete(2).unwrap()), BigUint::from(3u32));
        assert_eq!(labeling_count(&build_comb(2).unwrap()), BigUint::from(1u32));
        assert_eq!(labeling_count(&TreeShape::leaf()), BigUint::from(1u32));
    }

    #[test]
    fn five_leaf_counts() {
        let t = parse_shape("((*,*),((*,*),*))").unwrap();
        assert_eq!(pattern_counts_scan(&t, 4).unwrap(), [2, 3]);
        assert_eq!(pattern_counts_dp(&t, 4).unwrap(), [2, 3]);
    }

    #[test]
    fn routes_agree_on_complete_trees() {
        for k in 2..=4 {
            let t = build_complete(k).unwrap();
            for n in 1..=5 {
                assert_eq!(
                    pattern_counts_scan(&t, n).unwrap(),
                    pattern_counts_dp(&t, n).unwrap()
                );
            }
        }
    }

    #[test]
    fn bicomb_b5() {
        let bal5 = build_bicomb(2, 3).unwrap();
        for n in 5..=12 {
            for i in 1..n {
                let t = build_bicomb(i, n - i).unwrap();
                let (i, j) = (i as u64, (n - i) as u64);
                let want = binomial_u128(i, 2).unwrap() * binomial_u128(j, 3).unwrap()
                    + binomial_u128(i, 3).unwrap() * binomial_u128(j, 2).unwrap();
                assert_eq!(count_pattern(&t, &bal5), want);
            }
        }
    }

    #[test]
    fn oversized_pattern_counts_zero() {
        let t = build_comb(3).unwrap();
        assert_eq!(count_pattern(&t, &build_comb(5).unwrap()), 0);
        assert!(pattern_counts(&t, 0, &Caps::default()).is_err());
    }

    #[test]
    fn dispatch_uses_dp_above_cap() {
        let caps = Caps {
            max_scan: 10,
            ..Caps::default()
        };
        let t = build_complete(3).unwrap();
        assert_eq!(
            pattern_counts(&t, 4, &caps).unwrap(),
            pattern_counts_scan(&t, 4).unwrap()
        );
    }
}
