use super::tree::TreeShape;
use crate::error::{Error, Result};

/// The caterpillar: every internal node has a leaf child.
pub fn build_comb(n: usize) -> Result<TreeShape> {
    if n == 0 {
        return Err(Error::domain("comb needs at least one leaf"));
    }
    let mut t = TreeShape::leaf();
    for _ in 1..n {
        t = TreeShape::node(TreeShape::leaf(), t);
    }
    Ok(t)
}

/// Combs of sizes `i` and `j` joined at a new root.
pub fn build_bicomb(i: usize, j: usize) -> Result<TreeShape> {
    if i == 0 || j == 0 {
        return Err(Error::domain("bicomb sides need at least one leaf"));
    }
    Ok(TreeShape::node(build_comb(i)?, build_comb(j)?))
}

/// A comb with `k` leaves where one leaf of the deepest cherry is replaced by
/// `t`; the result has `leaf_count(t) + k - 1` leaves.
pub fn build_comb_replace(t: &TreeShape, k: usize) -> Result<TreeShape> {
    if k < 2 {
        return Err(Error::domain("comb replacement needs k >= 2"));
    }
    let mut out = t.clone();
    for _ in 1..k {
        out = TreeShape::node(TreeShape::leaf(), out);
    }
    Ok(out)
}

/// The complete symmetric tree on `2^depth` leaves.
pub fn build_complete(depth: u32) -> Result<TreeShape> {
    if depth > 24 {
        return Err(Error::domain(format!("complete tree of depth {depth} is too large")));
    }
    let mut t = TreeShape::leaf();
    for _ in 0..depth {
        t = TreeShape::node(t.clone(), t);
    }
    Ok(t)
}

/// The unique shape whose every internal node splits its leaves as evenly as
/// possible (child leaf counts differ by at most one).
pub fn build_max_balanced(n: usize) -> Result<TreeShape> {
    if n == 0 {
        return Err(Error::domain("balanced tree needs at least one leaf"));
    }
    fn go(n: usize, memo: &mut Vec<Option<TreeShape>>) -> TreeShape {
        if let Some(t) = &memo[n] {
            return t.clone();
        }
        let t = if n == 1 {
            TreeShape::leaf()
        } else {
            TreeShape::node(go(n.div_ceil(2), memo), go(n / 2, memo))
        };
        memo[n] = Some(t.clone());
        t
    }
    Ok(go(n, &mut vec![None; n + 1]))
}

pub fn is_comb(t: &TreeShape) -> bool {
    match t.children() {
        None => true,
        Some((l, r)) => l.is_leaf() && is_comb(r),
    }
}

/// Human-readable name for the named small shapes (`Comb_n`, `Bal_4`,
/// `Gir_5`, `Bal_5`); anything else is shown by its encoding.
pub fn shape_name(t: &TreeShape) -> String {
    match (t.leaf_count(), t.encoding()) {
        (1, _) => "Leaf".to_string(),
        (n, _) if is_comb(t) => format!("Comb_{n}"),
        (4, "((*,*),(*,*))") => "Bal_4".to_string(),
        (5, "(*,((*,*),(*,*)))") => "Gir_5".to_string(),
        (5, "((*,*),(*,(*,*)))") => "Bal_5".to_string(),
        _ => t.encoding().to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::parse_shape;

    #[test]
    fn named_constructions() {
        let bal4 = parse_shape("((*,*),(*,*))").unwrap();
        let gir5 = parse_shape("(*,((*,*),(*,*)))").unwrap();
        let bal5 = parse_shape("((*,*),(*,(*,*)))").unwrap();
        assert_eq!(build_bicomb(2, 3).unwrap(), bal5);
        assert_eq!(build_comb_replace(&bal4, 2).unwrap(), gir5);
        assert_eq!(build_complete(2).unwrap(), bal4);
        assert_eq!(build_max_balanced(4).unwrap(), bal4);
        assert_eq!(build_comb(4).unwrap(), parse_shape("(*,(*,(*,*)))").unwrap());
        assert_eq!(build_bicomb(1, 4).unwrap(), build_comb(5).unwrap());
        assert_eq!(build_complete(0).unwrap(), TreeShape::leaf());
    }

    #[test]
    fn sizes() {
        for n in 1..30 {
            assert_eq!(build_comb(n).unwrap().leaf_count(), n);
            assert_eq!(build_max_balanced(n).unwrap().leaf_count(), n);
        }
        for d in 0..6 {
            assert_eq!(build_complete(d).unwrap().leaf_count(), 1 << d);
            assert_eq!(build_complete(d).unwrap(), build_max_balanced(1 << d).unwrap());
        }
        let gir5 = parse_shape("(*,((*,*),(*,*)))").unwrap();
        assert_eq!(build_comb_replace(&gir5, 4).unwrap().leaf_count(), 8);
    }

    #[test]
    fn invalid_sizes() {
        assert!(build_comb(0).is_err());
        assert!(build_bicomb(0, 3).is_err());
        assert!(build_comb_replace(&TreeShape::leaf(), 1).is_err());
        assert!(build_max_balanced(0).is_err());
        assert!(build_complete(25).is_err());
    }

    #[test]
    fn balanced_nodes_differ_by_at_most_one() {
        fn check(t: &TreeShape) -> bool {
            match t.children() {
                None => true,
                Some((l, r)) => {
                    l.leaf_count().abs_diff(r.leaf_count()) <= 1 && check(l) && check(r)
                }
            }
        }
        for n in 1..40 {
            assert!(check(&build_max_balanced(n).unwrap()));
        }
    }

    #[test]
    fn names() {
        assert_eq!(shape_name(&build_comb(4).unwrap()), "Comb_4");
        assert_eq!(shape_name(&build_complete(2).unwrap()), "Bal_4");
        assert_eq!(shape_name(&build_bicomb(2, 3).unwrap()), "Bal_5");
        assert_eq!(shape_name(&TreeShape::leaf()), "Leaf");
        assert_eq!(shape_name(&build_complete(3).unwrap()), build_complete(3).unwrap().encoding());
    }
}
