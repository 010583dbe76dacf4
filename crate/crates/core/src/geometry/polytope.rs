use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::lp::{FarkasCertificate, LinearProgram, LpOutcome, Relation};
use crate::caps::Caps;
use crate::density::density_matrix_with;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// A finite list of points in `dim` coordinates, each tagged with where it
/// came from (usually the encoding of the tree it is the density row of).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<Rational>>,
    provenance: Vec<String>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<Rational>>, provenance: Vec<String>) -> Result<PointSet> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::domain(format!(
                "point of dimension {} in a {dim}-dimensional set",
                p.len()
            )));
        }
        if provenance.len() != points.len() {
            return Err(Error::domain("provenance list must match the point list"));
        }
        Ok(PointSet {
            dim,
            points,
            provenance,
        })
    }

    /// Points without provenance; each is tagged with its index.
    pub fn from_points(dim: usize, points: Vec<Vec<Rational>>) -> Result<PointSet> {
        let provenance = (0..points.len()).map(|i| i.to_string()).collect();
        PointSet::new(dim, points, provenance)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// For each point, the index of the first point equal to it.
    pub fn representatives(&self) -> Vec<usize> {
        let mut first: HashMap<&[Rational], usize> = HashMap::new();
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| *first.entry(p.as_slice()).or_insert(i))
            .collect()
    }

    /// Number of distinct points.
    pub fn distinct_count(&self) -> usize {
        let reps = self.representatives();
        reps.iter().enumerate().filter(|(i, r)| i == *r).count()
    }
}

/// A point set together with its exactly certified vertices.
///
/// `vertices` holds, for each distinct extreme point, the index of its first
/// occurrence, in increasing order. Every other point is a convex
/// combination of the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    points: PointSet,
    vertices: Vec<usize>,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.points.dim
    }

    pub fn point_set(&self) -> &PointSet {
        &self.points
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points.points
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_points(&self) -> Vec<&[Rational]> {
        self.vertices.iter().map(|&v| self.points.points[v].as_slice()).collect()
    }

    pub fn is_vertex_point(&self, x: &[Rational]) -> bool {
        self.vertices.iter().any(|&v| self.points.points[v] == x)
    }

    /// Provenance tags of every input point equal to vertex `v`.
    pub fn vertex_provenance(&self, v: usize) -> Vec<&str> {
        let target = &self.points.points[v];
        self.points
            .points
            .iter()
            .zip(&self.points.provenance)
            .filter(|(p, _)| *p == target)
            .map(|(_, tag)| tag.as_str())
            .collect()
    }

    /// Exact membership of `x` in the convex hull of the vertices.
    pub fn contains_point(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::domain("point dimension does not match polytope"));
        }
        let verts: Vec<Vec<Rational>> = self.vertex_points().into_iter().map(<[_]>::to_vec).collect();
        Ok(matches!(membership(&verts, x), LpOutcome::Feasible { .. }))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim(),
            "points": self
                .points
                .points
                .iter()
                .map(|p| p.iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "vertices": self.vertices,
            "provenance": self.points.provenance,
        })
    }

    /// Reads the JSON written by [`Polytope::to_json`]. The stored vertex
    /// list is discarded and recertified.
    pub fn from_json(text: &str) -> Result<Polytope> {
        #[derive(serde::Deserialize)]
        struct Raw {
            dim: usize,
            points: Vec<Vec<String>>,
            provenance: Option<Vec<String>>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        let points = raw
            .points
            .iter()
            .map(|p| p.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let ps = match raw.provenance {
            Some(tags) => PointSet::new(raw.dim, points, tags)?,
            None => PointSet::from_points(raw.dim, points)?,
        };
        certify_vertices(ps)
    }
}

/// Feasibility of `x = Σ λ_j p_j`, `Σ λ_j = 1`, `λ >= 0`.
///
/// A feasible outcome carries the weights `λ`; an infeasible one carries a
/// Farkas certificate over the `dim + 1` rows (coordinates first, then the
/// weight-sum row).
pub fn membership(points: &[Vec<Rational>], x: &[Rational]) -> LpOutcome {
    membership_program(points, x).solve()
}

/// The LP behind [`membership`], for checking its certificates.
pub fn membership_program(points: &[Vec<Rational>], x: &[Rational]) -> LinearProgram {
    let mut lp = LinearProgram::new(points.len());
    for (k, xk) in x.iter().enumerate() {
        let row = points.iter().map(|p| p[k].clone()).collect();
        lp.add_constraint(row, Relation::Eq, xk.clone())
            .expect("row length equals point count");
    }
    lp.add_constraint(vec![Rational::one(); points.len()], Relation::Eq, Rational::one())
        .expect("row length equals point count");
    lp
}

/// Certifies which points are extreme.
///
/// Duplicates are collapsed first; a distinct point is a vertex iff the LP
/// writing it as a convex combination of the other distinct points is
/// infeasible. The LPs run concurrently; the result is deterministic.
pub fn certify_vertices(ps: PointSet) -> Result<Polytope> {
    if ps.is_empty() {
        return Err(Error::domain("cannot certify vertices of an empty point set"));
    }
    let reps = ps.representatives();
    let distinct: Vec<usize> = (0..ps.len()).filter(|&i| reps[i] == i).collect();
    let vertices = distinct
        .par_iter()
        .map(|&i| {
            let others: Vec<Vec<Rational>> = distinct
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| ps.points[j].clone())
                .collect();
            let extreme = others.is_empty()
                || matches!(membership(&others, &ps.points[i]), LpOutcome::Infeasible(_));
            extreme.then_some(i)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(Polytope {
        points: ps,
        vertices,
    })
}

/// `EX_n^m`: the polytope spanned by the density rows of all `m`-leaf shapes.
pub fn ex_polytope(n: usize, m: usize) -> Result<Polytope> {
    ex_polytope_with(n, m, &Caps::default())
}

pub fn ex_polytope_with(n: usize, m: usize, caps: &Caps) -> Result<Polytope> {
    let matrix = density_matrix_with(n, m, caps)?;
    let dim = matrix.rows_index().len();
    let provenance = matrix
        .columns_index()
        .iter()
        .map(|t| t.encoding().to_string())
        .collect();
    let points = matrix.columns().iter().map(|c| c.probs().to_vec()).collect();
    certify_vertices(PointSet::new(dim, points, provenance)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Containment {
    Contained,
    /// Vertex `vertex` of the inner polytope lies outside the outer one.
    Violated {
        vertex: usize,
        point: Vec<Rational>,
        certificate: FarkasCertificate,
    },
}

impl Containment {
    pub fn holds(&self) -> bool {
        matches!(self, Containment::Contained)
    }
}

/// Whether every vertex of `inner` lies in `outer`. Reports the first
/// violating vertex (in vertex order) with its infeasibility certificate.
pub fn contains_polytope(inner: &Polytope, outer: &Polytope) -> Result<Containment> {
    if inner.dim() != outer.dim() {
        return Err(Error::domain(format!(
            "dimension mismatch: {} vs {}",
            inner.dim(),
            outer.dim()
        )));
    }
    let outer_verts: Vec<Vec<Rational>> =
        outer.vertex_points().into_iter().map(<[_]>::to_vec).collect();
    let outcomes: Vec<(usize, LpOutcome)> = inner
        .vertices
        .par_iter()
        .map(|&v| (v, membership(&outer_verts, &inner.points()[v])))
        .collect();
    for (v, outcome) in outcomes {
        if let LpOutcome::Infeasible(certificate) = outcome {
            return Ok(Containment::Violated {
                vertex: v,
                point: inner.points()[v].clone(),
                certificate,
            });
        }
    }
    Ok(Containment::Contained)
}

/// The face where `coordinate` is zero, recertified. The result may have no
/// points at all.
pub fn face_restrict(poly: &Polytope, coordinate: usize) -> Result<Polytope> {
    if coordinate >= poly.dim() {
        return Err(Error::domain(format!(
            "coordinate {coordinate} out of range for dimension {}",
            poly.dim()
        )));
    }
    let (points, provenance): (Vec<_>, Vec<_>) = poly
        .points()
        .iter()
        .zip(poly.point_set().provenance())
        .filter(|(p, _)| p[coordinate].is_zero())
        .map(|(p, tag)| (p.clone(), tag.clone()))
        .unzip();
    let ps = PointSet::new(poly.dim(), points, provenance)?;
    if ps.is_empty() {
        return Ok(Polytope {
            points: ps,
            vertices: Vec::new(),
        });
    }
    certify_vertices(ps)
}

/// Drops the last coordinate.
pub fn project_2d(point: &[Rational]) -> Vec<Rational> {
    point[..point.len().saturating_sub(1)].to_vec()
}

/// Dimension of the affine hull, by exact elimination on differences.
pub fn affine_rank(points: &[Vec<Rational>]) -> usize {
    let Some((base, rest)) = points.split_first() else {
        return 0;
    };
    let mut rows: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let cols = base.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank].clone();
        for r in rank + 1..rows.len() {
            if !rows[r][c].is_zero() {
                let f = &rows[r][c] / &p[c];
                for (v, pv) in rows[r].iter_mut().zip(&p) {
                    *v -= &f * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}
