use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Sign of the cross product `(b - a) x (c - a)`: positive for a left turn.
pub fn orientation(a: &[Rational], b: &[Rational], c: &[Rational]) -> Ordering {
    let cross = (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0]);
    if cross.is_positive() {
        Ordering::Greater
    } else if cross.is_zero() {
        Ordering::Equal
    } else {
        Ordering::Less
    }
}

/// Strict convex hull of planar points by monotone chain.
///
/// Returns indices of the hull vertices in counterclockwise order starting
/// from the lexicographically smallest point. Collinear boundary points and
/// duplicates are dropped; among duplicates the lowest index is kept.
pub fn convex_hull_2d(points: &[Vec<Rational>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        points[i][0]
            .cmp(&points[j][0])
            .then_with(|| points[i][1].cmp(&points[j][1]))
            .then(i.cmp(&j))
    });
    order.dedup_by(|b, a| points[*a] == points[*b]);
    if order.len() <= 2 {
        return order;
    }
    let chain = |iter: &mut dyn Iterator<Item = usize>| {
        let mut out: Vec<usize> = Vec::new();
        for i in iter {
            while out.len() >= 2
                && orientation(
                    &points[out[out.len() - 2]],
                    &points[out[out.len() - 1]],
                    &points[i],
                ) != Ordering::Greater
            {
                out.pop();
            }
            out.push(i);
        }
        out.pop();
        out
    };
    let mut hull = chain(&mut order.iter().copied());
    hull.extend(chain(&mut order.iter().rev().copied()));
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pts(raw: &[(i64, i64)]) -> Vec<Vec<Rational>> {
        raw.iter().map(|&(x, y)| vec![int(x), int(y)]).collect()
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let p = pts(&[(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0), (2, 2)]);
        assert_eq!(convex_hull_2d(&p), vec![0, 1, 2, 3]);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(convex_hull_2d(&pts(&[(1, 1), (1, 1)])), vec![0]);
        assert_eq!(convex_hull_2d(&pts(&[(0, 0), (1, 1), (2, 2)])), vec![0, 2]);
    }
}
