#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treepoly::TreeShape;

/// A random shape with `n` leaves from uniformly random split sizes.
pub fn random_shape(rng: &mut impl Rng, n: usize) -> TreeShape {
    if n == 1 {
        return TreeShape::leaf();
    }
    let k = rng.gen_range(1..n);
    TreeShape::node(random_shape(rng, k), random_shape(rng, n - k))
}

pub fn shape_with(n: usize, seed: u64) -> TreeShape {
    random_shape(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

pub fn shape_strategy(leaves: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = TreeShape> {
    (leaves, any::<u64>()).prop_map(|(n, seed)| shape_with(n, seed))
}

/// Encoding with child order chosen at random, so usually not canonical.
pub fn shuffled_encoding(t: &TreeShape, rng: &mut impl Rng) -> String {
    match t.children() {
        None => "*".into(),
        Some((a, b)) => {
            let (x, y) = (shuffled_encoding(a, rng), shuffled_encoding(b, rng));
            if rng.gen_bool(0.5) {
                format!("({x},{y})")
            } else {
                format!("( {y} , {x} )")
            }
        }
    }
}
