use super::tree::TreeShape;
use crate::error::{Error, Result};

/// Leaf positions (0-based, left to right in canonical order) of a host shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafSubset {
    indices: Vec<usize>,
}

impl LeafSubset {
    /// Validates that `indices` are strictly increasing and below `host_leaves`.
    pub fn new(indices: Vec<usize>, host_leaves: usize) -> Result<LeafSubset> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("leaf subset must be strictly increasing"));
        }
        if let Some(&last) = indices.last() {
            if last >= host_leaves {
                return Err(Error::domain(format!(
                    "leaf index {last} out of range for a {host_leaves}-leaf shape"
                )));
            }
        }
        Ok(LeafSubset { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// The canonical shape induced on the leaves `s`: all other leaves are
/// removed and the resulting degree-2 vertices are suppressed.
pub fn restrict(t: &TreeShape, s: &LeafSubset) -> Result<TreeShape> {
    if s.is_empty() {
        return Err(Error::domain("cannot restrict to an empty leaf subset"));
    }
    if s.indices().last().is_some_and(|&i| i >= t.leaf_count()) {
        return Err(Error::domain("leaf subset does not fit the host shape"));
    }
    Ok(restrict_sorted(t, s.indices(), 0).expect("nonempty subset"))
}

// `keep` is sorted and every entry lies in [offset, offset + leaf_count(t)).
pub(crate) fn restrict_sorted(t: &TreeShape, keep: &[usize], offset: usize) -> Option<TreeShape> {
    if keep.is_empty() {
        return None;
    }
    if keep.len() == t.leaf_count() {
        return Some(t.clone());
    }
    let (l, r) = t.children().expect("a leaf is either fully kept or dropped");
    let split = offset + l.leaf_count();
    let cut = keep.partition_point(|&i| i < split);
    match (
        restrict_sorted(l, &keep[..cut], offset),
        restrict_sorted(r, &keep[cut..], split),
    ) {
        (Some(a), Some(b)) => Some(TreeShape::node(a, b)),
        (a, b) => a.or(b),
    }
}
