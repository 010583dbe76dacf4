//! CSV data behind the projection figures.
//!
//! Coordinates `p1, p2, p3` are the exact Comb_5, Gir_5 and Bal_5 densities;
//! `x, y` repeat `p1, p2` as decimals for plotting.

use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull_2d, ex_polytope_with, project_2d, Polytope};
use crate::models::{beta_distribution, multinomial_distribution, BetaParam, MultinomialParams};
use crate::rational::{format_decimal, format_rational, int, ratio, Rational};
use crate::shapes::{build_comb, parse_shape, TreeShape};

const DECIMALS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// `EX_5^7` projected to the first two coordinates, with its hull.
    Fig4,
    /// The beta curve and the multinomial model on the cherry skeleton.
    Fig5,
    /// Hulls of `EX_5^n` for n = 5, 6, 9, 12, the beta curve, and the
    /// multinomial model on the three-leaf comb.
    Fig6,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::Fig4, Figure::Fig5, Figure::Fig6];
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
        })
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Figure> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fig4" | "4" => Ok(Figure::Fig4),
            "fig5" | "5" => Ok(Figure::Fig5),
            "fig6" | "6" => Ok(Figure::Fig6),
            other => Err(Error::domain(format!("unknown figure {other:?} (fig4, fig5, fig6)"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FigureSummary {
    pub files: Vec<PathBuf>,
    pub notes: Vec<String>,
}

/// β values for the beta curve, from the comb endpoint to infinity.
pub fn beta_grid() -> Vec<BetaParam> {
    let mut grid = vec![BetaParam::CombLimit];
    for b in [
        ratio(-7, 4),
        ratio(-3, 2),
        int(-1),
        ratio(-1, 2),
        int(0),
        ratio(1, 2),
        int(1),
        int(2),
        int(4),
        int(10),
        int(100),
    ] {
        grid.push(BetaParam::Finite(b));
    }
    grid.push(BetaParam::Infinity);
    grid
}

/// All weight vectors on `d` coordinates with entries in `{0, 1/k, …, 1}`.
pub fn simplex_grid(d: usize, k: usize) -> Vec<Vec<Rational>> {
    fn rec(d: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == d {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in (0..=left).rev() {
            prefix.push(c);
            rec(d, left - c, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    if d > 0 {
        rec(d, k, &mut Vec::new(), &mut raw);
    }
    raw.into_iter()
        .map(|c| c.into_iter().map(|v| ratio(v as i64, k as i64)).collect())
        .collect()
}

pub fn emit_figure_data(figure: Figure, dir: &Path, caps: &Caps) -> Result<FigureSummary> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut summary = FigureSummary::default();
    match figure {
        Figure::Fig4 => {
            let poly = ex_polytope_with(5, 7, caps)?;
            let path = dir.join("fig4_points.csv");
            write_points(&path, &poly)?;
            summary.files.push(path);
            let path = dir.join("fig4_hull.csv");
            let cycle = write_hulls(&path, &[(7, &poly)])?;
            summary.files.push(path);
            summary.notes.push(format!(
                "fig4: {} points, {} distinct, {} hull vertices",
                poly.points().len(),
                poly.point_set().distinct_count(),
                cycle
            ));
        }
        Figure::Fig5 => {
            let path = dir.join("fig5_beta.csv");
            write_beta_curve(&path)?;
            summary.files.push(path);
            let path = dir.join("fig5_multinomial.csv");
            let rows = write_multinomial(&path, &parse_shape("(*,*)")?, 20)?;
            summary.files.push(path);
            summary.notes.push(format!("fig5: {} beta samples, {rows} multinomial samples", beta_grid().len()));
        }
        Figure::Fig6 => {
            let ns = [5usize, 6, 9, 12];
            let polys = ns
                .par_iter()
                .map(|&n| ex_polytope_with(5, n, caps))
                .collect::<Result<Vec<_>>>()?;
            let path = dir.join("fig6_hulls.csv");
            let pairs: Vec<(usize, &Polytope)> = ns.iter().copied().zip(&polys).collect();
            write_hulls(&path, &pairs)?;
            summary.files.push(path);
            let path = dir.join("fig6_beta.csv");
            write_beta_curve(&path)?;
            summary.files.push(path);
            let path = dir.join("fig6_multinomial.csv");
            let rows = write_multinomial(&path, &build_comb(3)?, 8)?;
            summary.files.push(path);
            for (n, p) in &pairs {
                summary.notes.push(format!("fig6: EX_5^{n} has {} vertices", p.vertices().len()));
            }
            summary.notes.push(format!("fig6: {rows} multinomial samples"));
        }
    }
    Ok(summary)
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn finish(mut w: csv::Writer<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn coords(p: &[Rational]) -> Vec<String> {
    let mut out: Vec<String> = p.iter().map(format_rational).collect();
    out.extend(project_2d(p).iter().map(|v| format_decimal(v, DECIMALS)));
    out
}

fn write_points(path: &Path, poly: &Polytope) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["tree", "p1", "p2", "p3", "x", "y", "vertex"])?;
    let reps = poly.point_set().representatives();
    for (i, (p, tag)) in poly.points().iter().zip(poly.point_set().provenance()).enumerate() {
        let mut record = vec![tag.clone()];
        record.extend(coords(p));
        record.push(poly.vertices().contains(&reps[i]).to_string());
        w.write_record(&record)?;
    }
    finish(w, path)
}

/// Vertices of each polytope in counterclockwise order of the projection.
/// Returns the number of vertices of the last polytope.
fn write_hulls(path: &Path, polys: &[(usize, &Polytope)]) -> Result<usize> {
    let mut w = writer(path)?;
    w.write_record(["n", "order", "p1", "p2", "p3", "x", "y", "trees"])?;
    let mut last = 0;
    for (n, poly) in polys {
        let verts = poly.vertices();
        let projected: Vec<Vec<Rational>> =
            verts.iter().map(|&v| project_2d(&poly.points()[v])).collect();
        let cycle = convex_hull_2d(&projected);
        for (order, &k) in cycle.iter().enumerate() {
            let v = verts[k];
            let mut record = vec![n.to_string(), order.to_string()];
            record.extend(coords(&poly.points()[v]));
            record.push(poly.vertex_provenance(v).join(";"));
            w.write_record(&record)?;
        }
        last = cycle.len();
    }
    finish(w, path)?;
    Ok(last)
}

fn write_beta_curve(path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["beta", "p1", "p2", "p3", "x", "y"])?;
    for beta in beta_grid() {
        let dist = beta_distribution(5, &beta)?;
        let mut record = vec![beta.to_string()];
        record.extend(coords(dist.probs()));
        w.write_record(&record)?;
    }
    finish(w, path)
}

fn write_multinomial(path: &Path, skeleton: &TreeShape, k: usize) -> Result<usize> {
    let edges = 2 * skeleton.leaf_count() - 1;
    let grid = simplex_grid(edges, k);
    let rows = grid
        .par_iter()
        .map(|t| {
            let params = MultinomialParams::new(skeleton.clone(), t.clone())?;
            Ok((t, multinomial_distribution(&params, 5)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut w = writer(path)?;
    let mut header: Vec<String> = (0..edges).map(|e| format!("t{e}")).collect();
    header.extend(["p1", "p2", "p3", "x", "y"].map(String::from));
    w.write_record(&header)?;
    for (t, dist) in &rows {
        let mut record: Vec<String> = t.iter().map(format_rational).collect();
        record.extend(coords(dist.probs()));
        w.write_record(&record)?;
    }
    finish(w, path)?;
    Ok(rows.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(simplex_grid(3, 2).len(), 6);
        assert_eq!(simplex_grid(5, 8).len(), 495);
        assert!(simplex_grid(3, 4).iter().all(|t| t.iter().sum::<Rational>() == int(1)));
    }

    #[test]
    fn figure_names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.to_string().parse::<Figure>().unwrap(), f);
        }
        assert!("fig7".parse::<Figure>().is_err());
    }

    #[test]
    fn fig4_files() {
        let dir = tempfile::tempdir().unwrap();
        let s = emit_figure_data(Figure::Fig4, dir.path(), &Caps::default()).unwrap();
        assert_eq!(s.files.len(), 2);
        let points = std::fs::read_to_string(dir.path().join("fig4_points.csv")).unwrap();
        assert_eq!(points.lines().count(), 12);
        assert!(s.notes[0].starts_with("fig4: 11 points"));
    }

    #[test]
    fn beta_endpoints() {
        let dir = tempfile::tempdir().unwrap();
        emit_figure_data(Figure::Fig5, dir.path(), &Caps::default()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("fig5_beta.csv")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[1].starts_with("-2,1,0,0,"));
        assert!(lines.last().unwrap().starts_with("inf,4/21,1/7,2/3,"));
    }
}
