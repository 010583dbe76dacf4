//! Unlabeled rooted binary tree shapes.
//!
//! A [`TreeShape`] is always stored in canonical child order, so two shapes
//! are equal exactly when their canonical encodings are equal. The encoding
//! doubles as the text wire format: a leaf is `*` and an internal node is
//! `(left,right)` with `left ≼ right`.
//!
//! The total order `≼` compares leaf counts first and then encodings,
//! character by character, under the alphabet ranking `*` < `(` < `,` < `)`.
//! Under this order the comb is always the first shape of its size, and the
//! five-leaf shapes come out as comb, giraffe, balanced.

mod build;
mod enumerate;
mod pattern;
mod restrict;
mod tree;

pub use build::{
    build_bicomb, build_comb, build_comb_replace, build_complete, build_max_balanced, is_comb,
    shape_name,
};
pub use enumerate::{enumerate_shapes, wedderburn_etherington, ShapeIndex};
pub use pattern::{
    count_pattern, count_pattern_with, labeling_count, pattern_counts, pattern_counts_dp,
    pattern_counts_scan, symmetric_nodes,
};
pub use restrict::{restrict, LeafSubset};
pub use tree::{compare_encodings, parse_shape, parse_shape_list, serialize_shape, TreeShape};
