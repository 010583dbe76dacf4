//! The marginalization map in shape coordinates.
//!
//! For a shape `T` with `m` leaves, marginalizing the point mass on `T` down to
//! `n` leaves gives the induced subtree density of every `n`-leaf shape in `T`:
//! the fraction of `n`-subsets of leaves whose restriction has that shape.
//! Those rows are the columns of the [`DensityMatrix`], and every
//! distribution over `RB_U(m)` marginalizes by mixing them.

use std::io::Write;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::rational::{format_rational, from_u128, parse_rational, Rational};
use crate::shapes::{
    enumerate_shapes, parse_shape, pattern_counts, wedderburn_etherington, ShapeIndex, TreeShape,
};

/// An exact probability vector indexed by the canonical order of `RB_U(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeDistribution {
    n: usize,
    probs: Vec<Rational>,
}

impl ShapeDistribution {
    pub fn new(n: usize, probs: Vec<Rational>) -> Result<ShapeDistribution> {
        let index = enumerate_shapes(n)?;
        if probs.len() != index.len() {
            return Err(Error::domain(format!(
                "distribution on {n}-leaf shapes needs {} entries, got {}",
                index.len(),
                probs.len()
            )));
        }
        if probs.iter().any(Signed::is_negative) {
            return Err(Error::domain("probabilities must be nonnegative"));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::domain(format!(
                "probabilities must sum to 1, got {total}"
            )));
        }
        Ok(ShapeDistribution { n, probs })
    }

    // Callers guarantee the invariants.
    pub(crate) fn from_parts(n: usize, probs: Vec<Rational>) -> ShapeDistribution {
        debug_assert_eq!(probs.iter().sum::<Rational>(), Rational::one());
        ShapeDistribution { n, probs }
    }

    pub fn point_mass(t: &TreeShape) -> ShapeDistribution {
        let index = enumerate_shapes(t.leaf_count()).expect("leaf_count >= 1");
        let mut probs = vec![Rational::zero(); index.len()];
        probs[index.position(t).expect("canonical shape")] = Rational::one();
        ShapeDistribution {
            n: t.leaf_count(),
            probs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<Rational> {
        self.probs
    }

    pub fn index(&self) -> Arc<ShapeIndex> {
        enumerate_shapes(self.n).expect("n >= 1")
    }

    /// Probability of `t`; zero for shapes of another size.
    pub fn prob(&self, t: &TreeShape) -> Rational {
        if t.leaf_count() != self.n {
            return Rational::zero();
        }
        let pos = self.index().position(t).expect("canonical shape");
        self.probs[pos].clone()
    }

    /// `(shape, probability)` pairs in canonical order.
    pub fn entries(&self) -> Vec<(TreeShape, Rational)> {
        self.index()
            .iter()
            .cloned()
            .zip(self.probs.iter().cloned())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DistributionFile {
            n: self.n,
            shapes: Some(self.index().iter().map(|t| t.encoding().to_string()).collect()),
            probs: self.probs.iter().map(format_rational).collect(),
        })
        .expect("plain data serializes")
    }

    /// Reads `{n, probs: ["p/q", ...], shapes?: [...]}`. When `shapes` is
    /// present the entries are matched by shape rather than by position.
    pub fn from_json(text: &str) -> Result<ShapeDistribution> {
        let file: DistributionFile = serde_json::from_str(text)?;
        let probs = file
            .probs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let Some(shapes) = file.shapes else {
            return ShapeDistribution::new(file.n, probs);
        };
        if shapes.len() != probs.len() {
            return Err(Error::domain("`shapes` and `probs` differ in length"));
        }
        let index = enumerate_shapes(file.n)?;
        let mut ordered = vec![Rational::zero(); index.len()];
        for (enc, p) in shapes.iter().zip(probs) {
            let t = parse_shape(enc)?;
            let pos = index.position(&t).ok_or_else(|| {
                Error::domain(format!("shape {enc} does not have {} leaves", file.n))
            })?;
            ordered[pos] += p;
        }
        ShapeDistribution::new(file.n, ordered)
    }
}

#[derive(Serialize, Deserialize)]
struct DistributionFile {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shapes: Option<Vec<String>>,
    probs: Vec<String>,
}

/// Induced subtree densities of all `n`-leaf shapes in `t`.
pub fn density_row(t: &TreeShape, n: usize) -> Result<ShapeDistribution> {
    density_row_with(t, n, &Caps::default())
}

pub fn density_row_with(t: &TreeShape, n: usize, caps: &Caps) -> Result<ShapeDistribution> {
    let m = t.leaf_count();
    if n == 0 || n > m {
        return Err(Error::domain(format!(
            "density row needs 1 <= n <= m, got n = {n}, m = {m}"
        )));
    }
    let counts = pattern_counts(t, n, caps)?;
    let total: u128 = counts.iter().sum();
    let total = from_u128(total);
    let probs = counts.into_iter().map(|c| from_u128(c) / &total).collect();
    Ok(ShapeDistribution::from_parts(n, probs))
}

/// Column `j` is the density row of the `j`-th shape of `RB_U(m)`.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    n: usize,
    m: usize,
    columns: Vec<ShapeDistribution>,
}

impl DensityMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn columns(&self) -> &[ShapeDistribution] {
        &self.columns
    }

    pub fn rows_index(&self) -> Arc<ShapeIndex> {
        enumerate_shapes(self.n).expect("n >= 1")
    }

    pub fn columns_index(&self) -> Arc<ShapeIndex> {
        enumerate_shapes(self.m).expect("m >= 1")
    }

    /// Applies the matrix to a distribution over `RB_U(m)`.
    pub fn apply(&self, p: &ShapeDistribution) -> Result<ShapeDistribution> {
        if p.n() != self.m {
            return Err(Error::domain(format!(
                "distribution on {} leaves does not match matrix source size {}",
                p.n(),
                self.m
            )));
        }
        Ok(mix(self.n, p.probs().iter().zip(&self.columns)))
    }

    /// CSV with a header of `RB_U(n)` encodings and one line per `T ∈ RB_U(m)`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["tree".to_string()];
        header.extend(self.rows_index().iter().map(|t| t.encoding().to_string()));
        w.write_record(&header)?;
        for (t, col) in self.columns_index().iter().zip(&self.columns) {
            let mut record = vec![t.encoding().to_string()];
            record.extend(col.probs().iter().map(format_rational));
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let columns: Vec<serde_json::Value> = self
            .columns_index()
            .iter()
            .zip(&self.columns)
            .map(|(t, col)| {
                serde_json::json!({
                    "tree": t.encoding(),
                    "density": col.probs().iter().map(format_rational).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "m": self.m,
            "rows": self.rows_index().iter().map(|t| t.encoding()).collect::<Vec<_>>(),
            "columns": columns,
        })
    }
}

pub fn density_matrix(n: usize, m: usize) -> Result<DensityMatrix> {
    density_matrix_with(n, m, &Caps::default())
}

/// Builds all columns (concurrently; the result does not depend on scheduling).
pub fn density_matrix_with(n: usize, m: usize, caps: &Caps) -> Result<DensityMatrix> {
    if n < 2 || n > m {
        return Err(Error::domain(format!(
            "density matrix needs 2 <= n <= m, got n = {n}, m = {m}"
        )));
    }
    let shapes = wedderburn_etherington(m).unwrap_or(u128::MAX);
    caps.check_shapes(shapes)?;
    let index = enumerate_shapes(m)?;
    let columns = index
        .shapes()
        .par_iter()
        .map(|t| density_row_with(t, n, caps))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityMatrix { n, m, columns })
}

/// Pushes a distribution on `m`-leaf shapes down to `n` leaves.
pub fn marginalize(p: &ShapeDistribution, n: usize) -> Result<ShapeDistribution> {
    marginalize_with(p, n, &Caps::default())
}

pub fn marginalize_with(p: &ShapeDistribution, n: usize, caps: &Caps) -> Result<ShapeDistribution> {
    if n == 0 || n > p.n() {
        return Err(Error::domain(format!(
            "cannot marginalize a {}-leaf distribution to {n} leaves",
            p.n()
        )));
    }
    if n == p.n() {
        return Ok(p.clone());
    }
    let index = p.index();
    let rows = index
        .shapes()
        .par_iter()
        .zip(p.probs())
        .filter(|(_, w)| !w.is_zero())
        .map(|(t, w)| density_row_with(t, n, caps).map(|row| (w.clone(), row)))
        .collect::<Result<Vec<_>>>()?;
    Ok(mix(n, rows.iter().map(|(w, row)| (w, row))))
}

fn mix<'a>(
    n: usize,
    terms: impl Iterator<Item = (&'a Rational, &'a ShapeDistribution)>,
) -> ShapeDistribution {
    let len = enumerate_shapes(n).expect("n >= 1").len();
    let mut probs = vec![Rational::zero(); len];
    for (w, col) in terms {
        if w.is_zero() {
            continue;
        }
        for (acc, x) in probs.iter_mut().zip(col.probs()) {
            *acc += w * x;
        }
    }
    ShapeDistribution::from_parts(n, probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::shapes::{build_comb, build_complete};

    #[test]
    fn five_leaf_row() {
        let t = parse_shape("((*,*),((*,*),*))").unwrap();
        let row = density_row(&t, 4).unwrap();
        assert_eq!(row.probs(), [ratio(2, 5), ratio(3, 5)]);
    }

    #[test]
    fn comb_rows_are_point_masses() {
        for m in 2..=10 {
            for n in 1..=m {
                let row = density_row(&build_comb(m).unwrap(), n).unwrap();
                assert_eq!(row, ShapeDistribution::point_mass(&build_comb(n).unwrap()));
            }
        }
    }

    #[test]
    fn complete_tree_rows() {
        let row = density_row(&build_complete(3).unwrap(), 4).unwrap();
        assert_eq!(row.probs()[1], ratio(19, 35));
        for k in 3..=5 {
            let row = density_row(&build_complete(k).unwrap(), 5).unwrap();
            assert_eq!(row.probs()[1], ratio(1, 7));
        }
    }

    #[test]
    fn row_errors() {
        let t = build_comb(4).unwrap();
        assert!(density_row(&t, 5).is_err());
        assert!(density_row(&t, 0).is_err());
    }

    #[test]
    fn matrix_shapes_and_caps() {
        let dm = density_matrix(4, 5).unwrap();
        assert_eq!(dm.columns().len(), 3);
        let bal5 = parse_shape("((*,*),(*,(*,*)))").unwrap();
        let j = dm.columns_index().position(&bal5).unwrap();
        assert_eq!(dm.columns()[j].probs(), [ratio(2, 5), ratio(3, 5)]);
        let dm = density_matrix(5, 6).unwrap();
        assert_eq!(dm.columns().len(), 6);
        for col in dm.columns() {
            assert!(col.probs().iter().sum::<Rational>().is_one());
        }
        // identity when n = m
        let dm = density_matrix(6, 6).unwrap();
        for (t, col) in dm.columns_index().iter().zip(dm.columns()) {
            assert_eq!(col, &ShapeDistribution::point_mass(t));
        }
        assert!(density_matrix(1, 4).is_err());
        assert!(density_matrix(5, 4).is_err());
        let tight = Caps {
            max_shapes: 10,
            ..Caps::default()
        };
        assert!(matches!(
            density_matrix_with(4, 8, &tight),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn distribution_validation() {
        assert!(ShapeDistribution::new(4, vec![ratio(1, 2), ratio(1, 2)]).is_ok());
        assert!(ShapeDistribution::new(4, vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(ShapeDistribution::new(4, vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        assert!(ShapeDistribution::new(4, vec![ratio(1, 1)]).is_err());
    }

    #[test]
    fn marginalize_basics() {
        let p = ShapeDistribution::point_mass(&build_comb(7).unwrap());
        let q = marginalize(&p, 4).unwrap();
        assert_eq!(q, ShapeDistribution::point_mass(&build_comb(4).unwrap()));
        assert_eq!(marginalize(&p, 7).unwrap(), p);
        assert!(marginalize(&p, 8).is_err());
        let dm = density_matrix(4, 7).unwrap();
        assert!(dm.apply(&ShapeDistribution::point_mass(&build_comb(6).unwrap())).is_err());
    }

    #[test]
    fn json_round_trip() {
        let row = density_row(&build_complete(3).unwrap(), 5).unwrap();
        let text = row.to_json().to_string();
        assert_eq!(ShapeDistribution::from_json(&text).unwrap(), row);
        let reordered = r#"{"n":4,"shapes":["((*,*),(*,*))","(*,(*,(*,*)))"],"probs":["1/3","2/3"]}"#;
        let d = ShapeDistribution::from_json(reordered).unwrap();
        assert_eq!(d.probs(), [ratio(2, 3), ratio(1, 3)]);
        assert!(ShapeDistribution::from_json(r#"{"n":4,"probs":["1/3"]}"#).is_err());
    }

    #[test]
    fn csv_layout() {
        let dm = density_matrix(4, 5).unwrap();
        let mut buf = Vec::new();
        dm.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], r#"tree,"(*,(*,(*,*)))","((*,*),(*,*))""#);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[3], r#""((*,*),(*,(*,*)))",2/5,3/5"#);
    }
}
