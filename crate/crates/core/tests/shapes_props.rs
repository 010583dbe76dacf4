mod common;

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{shape_strategy, shape_with, shuffled_encoding};
use treepoly::shapes::{
    build_bicomb, build_comb, count_pattern, enumerate_shapes, labeling_count, parse_shape,
    pattern_counts_dp, pattern_counts_scan, restrict, wedderburn_etherington, LeafSubset,
};
use treepoly::TreeShape;

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

// every shape on n leaves arises by attaching a new leaf to some edge
// (including above the root) of a shape on n - 1 leaves
fn grow(t: &TreeShape) -> Vec<TreeShape> {
    let mut out = vec![TreeShape::node(t.clone(), TreeShape::leaf())];
    if let Some((a, b)) = t.children() {
        for a2 in grow(a) {
            out.push(TreeShape::node(a2, b.clone()));
        }
        for b2 in grow(b) {
            out.push(TreeShape::node(a.clone(), b2));
        }
    }
    out
}

#[test]
fn enumeration_matches_leaf_insertion() {
    let mut level: BTreeSet<String> = ["*".to_string()].into();
    for n in 2..=11 {
        level = level
            .iter()
            .flat_map(|e| grow(&parse_shape(e).unwrap()))
            .map(|t| t.encoding().to_string())
            .collect();
        let idx = enumerate_shapes(n).unwrap();
        let listed: BTreeSet<String> = idx.iter().map(|t| t.encoding().to_string()).collect();
        assert_eq!(listed, level, "n = {n}");
        assert_eq!(idx.len(), level.len());
        assert_eq!(wedderburn_etherington(n), Some(level.len() as u128));
    }
}

#[test]
fn wedderburn_etherington_values() {
    let known = [1u128, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451];
    for (n, &w) in known.iter().enumerate() {
        assert_eq!(wedderburn_etherington(n + 1), Some(w));
    }
    assert_eq!(wedderburn_etherington(20), Some(293547));
}

#[test]
fn labelings_partition_labeled_trees() {
    for n in 2..=10usize {
        let total: BigUint = enumerate_shapes(n).unwrap().iter().map(labeling_count).sum();
        let double_fact: BigUint = (1..=2 * n as u64 - 3).step_by(2).map(BigUint::from).product();
        assert_eq!(total, double_fact, "n = {n}");
    }
}

// brute-force labeled count: distinct labeled trees reachable by permuting leaves
fn labeled_forms(t: &TreeShape) -> BTreeSet<String> {
    fn label(t: &TreeShape, labels: &mut std::slice::Iter<'_, usize>) -> String {
        match t.children() {
            None => labels.next().unwrap().to_string(),
            Some((a, b)) => {
                let (x, y) = (label(a, labels), label(b, labels));
                let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                format!("({lo},{hi})")
            }
        }
    }
    (0..t.leaf_count())
        .permutations(t.leaf_count())
        .map(|p| label(t, &mut p.iter()))
        .collect()
}

#[test]
fn labeling_count_matches_permutation_orbits() {
    for n in 1..=7 {
        for t in enumerate_shapes(n).unwrap().iter() {
            assert_eq!(labeling_count(t), BigUint::from(labeled_forms(t).len()), "{t}");
        }
    }
}

#[test]
fn bicomb_balanced_count_peaks_at_half() {
    for n in 5..=14 {
        let b5 = |i: usize| count_pattern(&build_bicomb(i, n - i).unwrap(), &build_bicomb(2, 3).unwrap());
        let values: Vec<u128> = (1..=n / 2).map(b5).collect();
        for (i, v) in (1..=n / 2).zip(&values) {
            let closed = binom(i, 2) * binom(n - i, 3) + binom(i, 3) * binom(n - i, 2);
            assert_eq!(*v, closed, "n = {n}, i = {i}");
        }
        assert_eq!(values.iter().max(), values.last(), "n = {n}");
    }
}

fn c5(t: &TreeShape) -> u128 {
    count_pattern(t, &build_comb(5).unwrap())
}

fn c4(t: &TreeShape) -> u128 {
    count_pattern(t, &build_comb(4).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn encoding_round_trips(t in shape_strategy(1..=20), seed in any::<u64>()) {
        prop_assert_eq!(parse_shape(t.encoding()).unwrap(), t.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let text = shuffled_encoding(&t, &mut rng);
        prop_assert_eq!(parse_shape(&text).unwrap(), t);
    }

    #[test]
    fn pattern_counts_partition_subsets(t in shape_strategy(1..=12), n in 1usize..=6) {
        prop_assume!(n <= t.leaf_count());
        let counts = pattern_counts_dp(&t, n).unwrap();
        prop_assert_eq!(counts.iter().sum::<u128>(), binom(t.leaf_count(), n));
        prop_assert_eq!(counts, pattern_counts_scan(&t, n).unwrap());
    }

    #[test]
    fn restriction_to_everything_or_one_leaf(t in shape_strategy(1..=16), leaf in any::<prop::sample::Index>()) {
        let m = t.leaf_count();
        prop_assert_eq!(restrict(&t, &LeafSubset::new((0..m).collect(), m).unwrap()).unwrap(), t.clone());
        let one = LeafSubset::new(vec![leaf.index(m)], m).unwrap();
        prop_assert_eq!(restrict(&t, &one).unwrap(), TreeShape::leaf());
    }

    #[test]
    fn switching_subtrees_lowers_comb_count(
        sizes in (1usize..=3, 0usize..=1, 1usize..=2, 0usize..=2),
        ctx in (0usize..=3, 0usize..=3),
        seed in any::<u64>(),
    ) {
        // n4 <= n3 < n1 and n4 < n2 <= n1
        let n4 = sizes.0;
        let n3 = n4 + sizes.1;
        let n2 = n4 + sizes.2;
        let n1 = n3.max(n2) + sizes.3.max(usize::from(n3 >= n2));
        prop_assert!(n1 >= n2 && n3 >= n4 && n1 > n3 && n2 > n4);
        let t1 = shape_with(n1, seed);
        let t2 = shape_with(n2, seed ^ 1);
        let t3 = shape_with(n3, seed ^ 2);
        let t4 = shape_with(n4, seed ^ 3);
        let tz = TreeShape::node(TreeShape::node(t1.clone(), t2.clone()), TreeShape::node(t3.clone(), t4.clone()));
        let tz2 = TreeShape::node(TreeShape::node(t1, t4), TreeShape::node(t3, t2));
        let (a, b, c, d) = (n1 as i128, n2 as i128, n3 as i128, n4 as i128);
        let diff = (a - c) * (b - d) * (a * c * (a + c - 3) + b * d * (b + d - 3)) / 6;
        prop_assert_eq!(c5(&tz) as i128 - c5(&tz2) as i128, diff);
        // embed below a context with n0 further leaves
        let wrap = |z: TreeShape| -> TreeShape {
            let mut t = z;
            if ctx.0 > 0 { t = TreeShape::node(shape_with(ctx.0, seed ^ 4), t); }
            if ctx.1 > 0 { t = TreeShape::node(shape_with(ctx.1, seed ^ 5), t); }
            t
        };
        let (t, t2) = (wrap(tz.clone()), wrap(tz2.clone()));
        let n0 = (ctx.0 + ctx.1) as i128;
        let expected = diff + n0 * (c4(&tz) as i128 - c4(&tz2) as i128);
        prop_assert_eq!(c5(&t) as i128 - c5(&t2) as i128, expected);
        prop_assert!(c5(&t) >= c5(&t2));
        if t.leaf_count() >= 7 {
            prop_assert!(c5(&t) > c5(&t2));
        }
    }

    #[test]
    fn moving_a_leaf_up_lowers_comb_count(
        sizes in (1usize..=6, 1usize..=6),
        n0 in 0usize..=4,
        seed in any::<u64>(),
    ) {
        let (n1, n2) = sizes;
        prop_assume!(n1 >= n2 && n1 + n2 >= 3);
        let t1 = shape_with(n1, seed);
        let t2 = shape_with(n2, seed ^ 1);
        let l = TreeShape::leaf();
        let tz = TreeShape::node(TreeShape::node(t1.clone(), t2.clone()), l.clone());
        let tz2 = TreeShape::node(t1, TreeShape::node(t2, l));
        prop_assert_eq!(c5(&tz) - c5(&tz2), binom(n1, 3) * n2 as u128);
        let wrap = |z: TreeShape| if n0 > 0 { TreeShape::node(shape_with(n0, seed ^ 2), z) } else { z };
        let (t, t2) = (wrap(tz), wrap(tz2));
        prop_assert!(c5(&t) >= c5(&t2));
        if t.leaf_count() >= 7 {
            prop_assert!(c5(&t) > c5(&t2));
        }
    }
}
