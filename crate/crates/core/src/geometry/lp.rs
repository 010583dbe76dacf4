//! Exact two-phase simplex over the rationals.
//!
//! Every variable is nonnegative. Ratio ties leave by lowest basic index,
//! and degenerate pivots switch entering to Bland's lowest-index rule, so
//! the method terminates without cycling. Infeasible programs come back with a
//! Farkas certificate that can be checked independently of the solver.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize c·x` (or pure feasibility) subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    constraints: Vec<Constraint>,
    objective: Option<Vec<Rational>>,
}

/// A vector `y` over the constraint rows with `yᵀA <= 0` on every variable,
/// `yᵀb > 0`, `y_i <= 0` on `<=` rows and `y_i >= 0` on `>=` rows. Any `x >= 0`
/// satisfying the constraints would give `0 >= yᵀAx >= yᵀb > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub y: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// A feasible point; optimal when an objective was given.
    Feasible {
        point: Vec<Rational>,
        objective: Option<Rational>,
    },
    Infeasible(FarkasCertificate),
    /// The objective grows without bound along `point + t·direction`, `t >= 0`.
    Unbounded {
        point: Vec<Rational>,
        direction: Vec<Rational>,
    },
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> LinearProgram {
        LinearProgram {
            num_vars,
            constraints: Vec::new(),
            objective: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::domain(format!(
                "constraint has {} coefficients for {} variables",
                coeffs.len(),
                self.num_vars
            )));
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) -> Result<()> {
        if objective.len() != self.num_vars {
            return Err(Error::domain("objective length does not match variable count"));
        }
        self.objective = Some(objective);
        Ok(())
    }

    /// Exact check that `x >= 0` satisfies every constraint.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

impl FarkasCertificate {
    /// Exact verification of the certificate against `lp`.
    pub fn verify(&self, lp: &LinearProgram) -> bool {
        if self.y.len() != lp.constraints.len() {
            return false;
        }
        let signs_ok = lp.constraints.iter().zip(&self.y).all(|(c, y)| match c.relation {
            Relation::Le => !y.is_positive(),
            Relation::Ge => !y.is_negative(),
            Relation::Eq => true,
        });
        let yb: Rational = lp.constraints.iter().zip(&self.y).map(|(c, y)| &c.rhs * y).sum();
        let ya_ok = (0..lp.num_vars).all(|j| {
            let v: Rational = lp
                .constraints
                .iter()
                .zip(&self.y)
                .map(|(c, y)| &c.coeffs[j] * y)
                .sum();
            !v.is_positive()
        });
        signs_ok && ya_ok && yb.is_positive()
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>, // constraint rows; last entry is the rhs
    cost: Vec<Rational>,      // reduced costs; last entry is -(objective value)
    basis: Vec<usize>,
    num_vars: usize,
    num_slack: usize,
    flips: Vec<bool>, // row was negated to make its rhs nonnegative
}

impl Tableau {
    fn width(&self) -> usize {
        self.num_vars + self.num_slack + self.rows.len()
    }

    fn artificial(&self, row: usize) -> usize {
        self.num_vars + self.num_slack + row
    }

    fn build(lp: &LinearProgram) -> Tableau {
        let m = lp.constraints.len();
        let num_slack = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let width = lp.num_vars + num_slack + m;
        let mut rows = Vec::with_capacity(m);
        let mut flips = Vec::with_capacity(m);
        let mut slack = lp.num_vars;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); width + 1];
            row[..lp.num_vars].clone_from_slice(&c.coeffs);
            match c.relation {
                Relation::Le => {
                    row[slack] = Rational::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[width] = c.rhs.clone();
            let flip = c.rhs.is_negative();
            if flip {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
            }
            row[lp.num_vars + num_slack + i] = Rational::one();
            rows.push(row);
            flips.push(flip);
        }
        // phase one: minimize the sum of artificials
        let mut cost = vec![Rational::zero(); width + 1];
        for row in &rows {
            for (j, v) in row.iter().enumerate() {
                if j < lp.num_vars + num_slack || j == width {
                    cost[j] -= v;
                }
            }
        }
        Tableau {
            rows,
            cost,
            basis: (0..m).map(|i| lp.num_vars + num_slack + i).collect(),
            num_vars: lp.num_vars,
            num_slack,
            flips,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        let update = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if !f.is_zero() {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row);
            }
        }
        update(&mut self.cost);
        self.basis[r] = c;
    }

    // Pivots over columns `< limit` until optimal. The entering column is the
    // most negative reduced cost; after a degenerate pivot the lowest-index
    // rule (Bland) takes over until the objective moves again, which rules
    // out cycling. Returns the entering column of an unbounded ray, if any.
    fn optimize(&mut self, limit: usize) -> Option<usize> {
        let w = self.width();
        let mut bland = false;
        loop {
            let enter = if bland {
                (0..limit).find(|&j| self.cost[j].is_negative())
            } else {
                (0..limit)
                    .filter(|&j| self.cost[j].is_negative())
                    .min_by(|&a, &b| self.cost[a].cmp(&self.cost[b]).then(a.cmp(&b)))
            };
            let enter = enter?;
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[w] / &row[enter];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return Some(enter),
                Some((r, ratio)) => {
                    bland = ratio.is_zero();
                    self.pivot(r, enter);
                }
            }
        }
    }

    fn point(&self) -> Vec<Rational> {
        let w = self.width();
        let mut x = vec![Rational::zero(); self.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                x[b] = self.rows[i][w].clone();
            }
        }
        x
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let w = self.width();
        let structural = self.num_vars + self.num_slack;
        self.optimize(structural);
        let phase_one = -self.cost[w].clone();
        if phase_one.is_positive() {
            // y_i = 1 - (reduced cost of artificial i), undoing row flips
            let y = (0..self.rows.len())
                .map(|i| {
                    let yi = Rational::one() - &self.cost[self.artificial(i)];
                    if self.flips[i] {
                        -yi
                    } else {
                        yi
                    }
                })
                .collect();
            return LpOutcome::Infeasible(FarkasCertificate { y });
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..self.rows.len() {
            if self.basis[r] >= structural {
                if let Some(c) = (0..structural).find(|&j| !self.rows[r][j].is_zero()) {
                    self.pivot(r, c);
                }
            }
        }
        let Some(objective) = &lp.objective else {
            return LpOutcome::Feasible {
                point: self.point(),
                objective: None,
            };
        };
        // phase two on min -c·x; artificials never re-enter
        let mut cost = vec![Rational::zero(); w + 1];
        for (j, c) in objective.iter().enumerate() {
            cost[j] = -c;
        }
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if !cb.is_zero() {
                for (v, a) in cost.iter_mut().zip(&self.rows[i]) {
                    *v -= &cb * a;
                }
            }
        }
        self.cost = cost;
        if let Some(enter) = self.optimize(structural) {
            let mut direction = vec![Rational::zero(); self.num_vars];
            if enter < self.num_vars {
                direction[enter] = Rational::one();
            }
            for (i, &b) in self.basis.iter().enumerate() {
                if b < self.num_vars {
                    direction[b] = -&self.rows[i][enter];
                }
            }
            return LpOutcome::Unbounded {
                point: self.point(),
                direction,
            };
        }
        LpOutcome::Feasible {
            point: self.point(),
            objective: Some(self.cost[w].clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn bounded_maximum() {
        let mut lp = LinearProgram::new(1);
        lp.add_constraint(vec![int(1)], Relation::Le, int(1)).unwrap();
        lp.maximize(vec![int(1)]).unwrap();
        assert_eq!(
            lp.solve(),
            LpOutcome::Feasible {
                point: vec![int(1)],
                objective: Some(int(1))
            }
        );
    }

    #[test]
    fn textbook_program() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.add_constraint(vec![int(1), int(0)], Relation::Le, int(4)).unwrap();
        lp.add_constraint(vec![int(0), int(2)], Relation::Le, int(12)).unwrap();
        lp.add_constraint(vec![int(3), int(2)], Relation::Le, int(18)).unwrap();
        lp.maximize(vec![int(3), int(5)]).unwrap();
        match lp.solve() {
            LpOutcome::Feasible { point, objective } => {
                assert_eq!(point, [int(2), int(6)]);
                assert_eq!(objective, Some(int(36)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // cycles under the largest-coefficient rule without a fallback
        let mut lp = LinearProgram::new(4);
        lp.add_constraint(vec![ratio(1, 4), int(-8), int(-1), int(9)], Relation::Le, int(0))
            .unwrap();
        lp.add_constraint(vec![ratio(1, 2), int(-12), ratio(-1, 2), int(3)], Relation::Le, int(0))
            .unwrap();
        lp.add_constraint(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1))
            .unwrap();
        lp.maximize(vec![ratio(3, 4), int(-20), ratio(1, 2), int(-6)]).unwrap();
        match lp.solve() {
            LpOutcome::Feasible { point, objective } => {
                assert_eq!(objective, Some(ratio(5, 4)));
                assert!(lp.is_feasible_point(&point));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(2);
        lp.add_constraint(vec![int(1), int(-1)], Relation::Le, int(1)).unwrap();
        lp.maximize(vec![int(1), int(0)]).unwrap();
        match lp.solve() {
            LpOutcome::Unbounded { point, direction } => {
                assert!(lp.is_feasible_point(&point));
                let moved: Vec<Rational> =
                    point.iter().zip(&direction).map(|(p, d)| p + d * int(10)).collect();
                assert!(lp.is_feasible_point(&moved));
                assert!(direction[0].is_positive());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_with_certificate() {
        // x + y = 1, x + y >= 2
        let mut lp = LinearProgram::new(2);
        lp.add_constraint(vec![int(1), int(1)], Relation::Eq, int(1)).unwrap();
        lp.add_constraint(vec![int(1), int(1)], Relation::Ge, int(2)).unwrap();
        match lp.solve() {
            LpOutcome::Infeasible(cert) => assert!(cert.verify(&lp)),
            other => panic!("{other:?}"),
        }
        // negative rhs rows are flipped internally
        let mut lp = LinearProgram::new(1);
        lp.add_constraint(vec![int(1)], Relation::Le, int(-1)).unwrap();
        match lp.solve() {
            LpOutcome::Infeasible(cert) => assert!(cert.verify(&lp)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(3);
        lp.add_constraint(vec![int(1), int(1), int(1)], Relation::Eq, int(1)).unwrap();
        lp.add_constraint(vec![int(2), int(2), int(2)], Relation::Eq, int(2)).unwrap();
        lp.add_constraint(vec![int(1), int(0), int(0)], Relation::Ge, ratio(1, 3)).unwrap();
        lp.maximize(vec![int(0), int(1), int(0)]).unwrap();
        match lp.solve() {
            LpOutcome::Feasible { point, objective } => {
                assert!(lp.is_feasible_point(&point));
                assert_eq!(objective, Some(ratio(2, 3)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_shapes_rejected() {
        let mut lp = LinearProgram::new(2);
        assert!(lp.add_constraint(vec![int(1)], Relation::Le, int(1)).is_err());
        assert!(lp.maximize(vec![int(1)]).is_err());
        assert!(!FarkasCertificate { y: vec![] }.verify(&{
            let mut l = LinearProgram::new(1);
            l.add_constraint(vec![int(1)], Relation::Le, int(1)).unwrap();
            l
        }));
    }
}
