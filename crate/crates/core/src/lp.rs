//! Dense two-phase simplex over arbitrary-precision rationals.
//!
//! Variables are non-negative unless declared free. Pivoting follows Bland's
//! rule. Every returned witness is substituted back into the constraints
//! before it leaves this module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tableau size cap when `POLYSTAB_MAX_CELLS` is unset.
pub const DEFAULT_MAX_CELLS: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    fn holds(&self, x: &[BigRational]) -> bool {
        let lhs: BigRational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    nvars: usize,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: Option<Vec<BigRational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    /// Objective attained.
    Optimal,
    /// No objective was given and a feasible point exists.
    Feasible,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Empty when infeasible.
    pub witness: Vec<BigRational>,
    pub objective: Option<BigRational>,
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            nvars,
            free: vec![false; nvars],
            constraints: Vec::new(),
            objective: None,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add_constraint(&mut self, c: Constraint) -> Result<()> {
        if c.coeffs.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "constraint has {} coefficients, program has {} variables",
                c.coeffs.len(),
                self.nvars
            )));
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Maximizes `objective . x`.
    pub fn maximize(&mut self, objective: Vec<BigRational>) -> Result<()> {
        if objective.len() != self.nvars {
            return Err(Error::Dimension("objective length differs from variable count".into()));
        }
        self.objective = Some(objective);
        Ok(())
    }

    /// Solves with the tableau cap taken from `POLYSTAB_MAX_CELLS`.
    pub fn solve(&self) -> Result<LpResult> {
        self.solve_with_cap(max_cells())
    }

    pub fn solve_with_cap(&self, cap: usize) -> Result<LpResult> {
        let result = Tableau::build(self, cap)?.run(self)?;
        if result.status != LpStatus::Infeasible && !self.constraints.iter().all(|c| c.holds(&result.witness)) {
            return Err(Error::Internal("simplex witness violates a constraint".into()));
        }
        Ok(result)
    }
}

fn max_cells() -> usize {
    std::env::var("POLYSTAB_MAX_CELLS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_CELLS)
}

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

struct Tableau {
    /// `rows x (cols + 1)`; the last column is the right-hand side.
    a: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    cols: usize,
    /// Columns of each original variable: `(positive part, negative part if free)`.
    var_cols: Vec<(usize, Option<usize>)>,
    artificial_from: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram, cap: usize) -> Result<Self> {
        let mut var_cols = Vec::with_capacity(lp.nvars);
        let mut next = 0;
        for v in 0..lp.nvars {
            if lp.free[v] {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            } else {
                var_cols.push((next, None));
                next += 1;
            }
        }
        let structural = next;
        let slack_count = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let rows = lp.constraints.len();
        // an artificial per row keeps the initial basis trivial to write down
        let artificial_from = structural + slack_count;
        let cols = artificial_from + rows;
        let cells = (rows + 1) * (cols + 1);
        if cells > cap {
            return Err(Error::LpTooLarge { cells, cap });
        }
        let mut a = vec![vec![BigRational::zero(); cols + 1]; rows];
        let mut basis = Vec::with_capacity(rows);
        let mut slack = structural;
        for (r, c) in lp.constraints.iter().enumerate() {
            let flip = c.rhs.is_negative();
            let sign = |x: &BigRational| if flip { -x } else { x.clone() };
            for (v, coef) in c.coeffs.iter().enumerate() {
                let (p, n) = var_cols[v];
                a[r][p] = sign(coef);
                if let Some(n) = n {
                    a[r][n] = -sign(coef);
                }
            }
            if c.relation != Relation::Eq {
                let s = if c.relation == Relation::Le { rat(1) } else { rat(-1) };
                a[r][slack] = sign(&s);
                slack += 1;
            }
            a[r][artificial_from + r] = rat(1);
            a[r][cols] = sign(&c.rhs);
            basis.push(artificial_from + r);
        }
        Ok(Tableau {
            a,
            basis,
            cols,
            var_cols,
            artificial_from,
        })
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpResult> {
        // phase one: maximize minus the sum of artificials
        let mut c1 = vec![BigRational::zero(); self.cols];
        for cost in &mut c1[self.artificial_from..] {
            *cost = rat(-1);
        }
        let mut obj = self.reduced_costs(&c1);
        if self.optimize(&mut obj, self.cols)? == Outcome::Unbounded {
            return Err(Error::Internal("phase one cannot be unbounded".into()));
        }
        if obj[self.cols].is_negative() {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                witness: Vec::new(),
                objective: None,
            });
        }
        self.expel_artificials();

        let Some(objective) = &lp.objective else {
            return Ok(LpResult {
                status: LpStatus::Feasible,
                witness: self.witness(),
                objective: None,
            });
        };
        let mut c2 = vec![BigRational::zero(); self.cols];
        for (v, coef) in objective.iter().enumerate() {
            let (p, n) = self.var_cols[v];
            c2[p] = coef.clone();
            if let Some(n) = n {
                c2[n] = -coef;
            }
        }
        let mut obj = self.reduced_costs(&c2);
        let outcome = self.optimize(&mut obj, self.artificial_from)?;
        let witness = self.witness();
        Ok(match outcome {
            Outcome::Unbounded => LpResult {
                status: LpStatus::Unbounded,
                witness,
                objective: None,
            },
            Outcome::Optimal => {
                let value = objective.iter().zip(&witness).map(|(a, b)| a * b).sum();
                LpResult {
                    status: LpStatus::Optimal,
                    witness,
                    objective: Some(value),
                }
            }
        })
    }

    /// `z_j - c_j` for every column, plus the current objective value last.
    fn reduced_costs(&self, c: &[BigRational]) -> Vec<BigRational> {
        let mut obj: Vec<BigRational> = (0..=self.cols)
            .map(|j| if j < self.cols { -&c[j] } else { BigRational::zero() })
            .collect();
        for (r, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for (j, o) in obj.iter_mut().enumerate() {
                if !self.a[r][j].is_zero() {
                    *o += &c[b] * &self.a[r][j];
                }
            }
        }
        obj
    }

    /// Bland's rule; only columns below `allowed` may enter.
    fn optimize(&mut self, obj: &mut [BigRational], allowed: usize) -> Result<Outcome> {
        loop {
            let Some(enter) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                return Ok(Outcome::Optimal);
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.a.len() {
                let coef = &self.a[r][enter];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = &self.a[r][self.cols] / coef;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Ok(Outcome::Unbounded);
            };
            self.pivot(row, enter, obj);
        }
    }

    fn pivot(&mut self, row: usize, col: usize, obj: &mut [BigRational]) {
        let inv = self.a[row][col].recip();
        for v in self.a[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.a[row].clone();
        let nz: Vec<usize> = (0..=self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (r, line) in self.a.iter_mut().enumerate() {
            if r == row || line[col].is_zero() {
                continue;
            }
            let factor = line[col].clone();
            for &j in &nz {
                line[j] -= &factor * &pivot_row[j];
            }
        }
        if !obj[col].is_zero() {
            let factor = obj[col].clone();
            for &j in &nz {
                obj[j] -= &factor * &pivot_row[j];
            }
        }
        self.basis[row] = col;
    }

    /// Pivots zero-valued artificials out of the basis; rows where that is
    /// impossible are redundant and dropped.
    fn expel_artificials(&mut self) {
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] < self.artificial_from {
                r += 1;
                continue;
            }
            match (0..self.artificial_from).find(|&j| !self.a[r][j].is_zero()) {
                Some(j) => {
                    let mut dummy = vec![BigRational::zero(); self.cols + 1];
                    self.pivot(r, j, &mut dummy);
                    r += 1;
                }
                None => {
                    self.a.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }

    fn witness(&self) -> Vec<BigRational> {
        let mut value = vec![BigRational::zero(); self.cols];
        for (r, &b) in self.basis.iter().enumerate() {
            value[b] = self.a[r][self.cols].clone();
        }
        self.var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &value[p] - &value[n],
                None => value[p].clone(),
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Optimal,
    Unbounded,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn maximize_bounded_variable() {
        let mut lp = LinearProgram::new(1);
        lp.set_free(0);
        lp.add_constraint(Constraint::new(vec![rat(1)], Relation::Le, rat(1))).unwrap();
        lp.maximize(vec![rat(1)]).unwrap();
        let res = lp.solve().unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.objective, Some(rat(1)));
        assert_eq!(res.witness, vec![rat(1)]);
    }

    #[test]
    fn symmetric_convex_combination() {
        let mut lp = LinearProgram::new(2);
        lp.add_constraint(Constraint::new(vec![rat(1), rat(1)], Relation::Eq, rat(1))).unwrap();
        lp.add_constraint(Constraint::new(vec![rat(1), rat(-1)], Relation::Eq, rat(0))).unwrap();
        let res = lp.solve().unwrap();
        assert_eq!(res.status, LpStatus::Feasible);
        assert_eq!(res.witness, vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn origin_outside_simplex_corner() {
        // c1 (1,0) + c2 (0,1) = 0 with c1 + c2 = 1; Farkas: y = (1,1,-1) gives
        // y.A = (0,0) >= 0 componentwise on columns while y.b = -1 < 0
        let mut lp = LinearProgram::new(2);
        lp.add_constraint(Constraint::new(vec![rat(1), rat(0)], Relation::Eq, rat(0))).unwrap();
        lp.add_constraint(Constraint::new(vec![rat(0), rat(1)], Relation::Eq, rat(0))).unwrap();
        lp.add_constraint(Constraint::new(vec![rat(1), rat(1)], Relation::Eq, rat(1))).unwrap();
        assert_eq!(lp.solve().unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_and_negative_rhs() {
        let mut lp = LinearProgram::new(2);
        lp.add_constraint(Constraint::new(vec![rat(1), rat(-1)], Relation::Le, rat(-2))).unwrap();
        lp.maximize(vec![rat(0), rat(1)]).unwrap();
        let res = lp.solve().unwrap();
        assert_eq!(res.status, LpStatus::Unbounded);

        let mut lp = LinearProgram::new(2);
        lp.add_constraint(Constraint::new(vec![rat(1), rat(1)], Relation::Ge, rat(3))).unwrap();
        lp.add_constraint(Constraint::new(vec![rat(1), rat(0)], Relation::Le, rat(1))).unwrap();
        lp.add_constraint(Constraint::new(vec![rat(0), rat(1)], Relation::Le, rat(5))).unwrap();
        lp.maximize(vec![rat(-1), rat(-1)]).unwrap();
        let res = lp.solve().unwrap();
        assert_eq!(res.objective, Some(rat(-3)));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        for _ in 0..3 {
            lp.add_constraint(Constraint::new(vec![rat(2), rat(2)], Relation::Eq, rat(2))).unwrap();
        }
        lp.maximize(vec![rat(1), rat(0)]).unwrap();
        let res = lp.solve().unwrap();
        assert_eq!(res.objective, Some(rat(1)));
    }

    #[test]
    fn cell_cap() {
        let mut lp = LinearProgram::new(3);
        lp.add_constraint(Constraint::new(vec![rat(1); 3], Relation::Eq, rat(1))).unwrap();
        assert!(matches!(lp.solve_with_cap(4), Err(Error::LpTooLarge { .. })));
        assert!(lp.solve_with_cap(100).is_ok());
    }

    #[test]
    fn dimension_errors() {
        let mut lp = LinearProgram::new(2);
        assert!(lp.add_constraint(Constraint::new(vec![rat(1)], Relation::Eq, rat(0))).is_err());
        assert!(lp.maximize(vec![rat(1)]).is_err());
    }
}
