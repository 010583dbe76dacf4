use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::tree::TreeShape;
use crate::error::{Error, Result};

/// All shapes with `n` leaves in canonical order, with reverse lookup.
pub struct ShapeIndex {
    n: usize,
    shapes: Vec<TreeShape>,
    lookup: HashMap<Box<str>, usize>,
}

impl ShapeIndex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn shapes(&self) -> &[TreeShape] {
        &self.shapes
    }

    pub fn get(&self, i: usize) -> Option<&TreeShape> {
        self.shapes.get(i)
    }

    pub fn position(&self, t: &TreeShape) -> Option<usize> {
        self.lookup.get(t.encoding()).copied()
    }

    pub fn position_of_encoding(&self, encoding: &str) -> Option<usize> {
        self.lookup.get(encoding).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TreeShape> {
        self.shapes.iter()
    }
}

impl std::fmt::Debug for ShapeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ShapeIndex")
            .field("n", &self.n)
            .field("len", &self.shapes.len())
            .finish()
    }
}

type Cache = Mutex<HashMap<usize, Arc<ShapeIndex>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Every canonical shape with `n` leaves, each exactly once, in canonical order.
///
/// Tables are built from the tables of smaller sizes by pairing `(a, b)` with
/// `a ≼ b`, and cached process-wide. Callers facing large `n` should check
/// [`wedderburn_etherington`] against their caps first.
pub fn enumerate_shapes(n: usize) -> Result<Arc<ShapeIndex>> {
    if n == 0 {
        return Err(Error::domain("shapes need at least one leaf"));
    }
    if let Some(idx) = cache().lock().unwrap().get(&n) {
        return Ok(idx.clone());
    }
    let shapes = if n == 1 {
        vec![TreeShape::leaf()]
    } else {
        let mut out = Vec::new();
        for i in 1..=n / 2 {
            let small = enumerate_shapes(i)?;
            let large = enumerate_shapes(n - i)?;
            for (ai, a) in small.iter().enumerate() {
                // equal halves: only pairs with a ≼ b
                let start = if i == n - i { ai } else { 0 };
                for b in &large.shapes()[start..] {
                    out.push(TreeShape::node(a.clone(), b.clone()));
                }
            }
        }
        out.sort();
        out
    };
    let lookup = shapes
        .iter()
        .enumerate()
        .map(|(i, t)| (Box::<str>::from(t.encoding()), i))
        .collect();
    let idx = Arc::new(ShapeIndex { n, shapes, lookup });
    let mut guard = cache().lock().unwrap();
    Ok(guard.entry(n).or_insert(idx).clone())
}

/// Number of shapes with `n` leaves (Wedderburn–Etherington numbers);
/// `None` on overflow.
pub fn wedderburn_etherington(n: usize) -> Option<u128> {
    if n == 0 {
        return Some(0);
    }
    let mut w: Vec<u128> = vec![0, 1];
    for k in 2..=n {
        let mut total: u128 = 0;
        for i in 1..k.div_ceil(2) {
            total = total.checked_add(w[i].checked_mul(w[k - i])?)?;
        }
        if k % 2 == 0 {
            let h = w[k / 2];
            total = total.checked_add(h.checked_mul(h + 1)? / 2)?;
        }
        w.push(total);
    }
    Some(w[n])
}
