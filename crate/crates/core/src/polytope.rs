//! Convex-hull predicates on finite integer point sets, each reduced to one
//! exact linear program.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Matrix;
use crate::lp::{rat, Constraint, LinearProgram, LpStatus, Relation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<i64>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Dimension(format!(
                "point of length {} in a set of dimension {dim}",
                p.len()
            )));
        }
        Ok(PointSet { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn subset(&self, indices: &BTreeSet<usize>) -> PointSet {
        PointSet {
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    fn check_query(&self, q: &[BigRational]) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Invalid("empty point set".into()));
        }
        if q.len() != self.dim {
            return Err(Error::Dimension(format!(
                "query of length {} against dimension {}",
                q.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Rows `sum_i c_i s_i = q` and `sum_i c_i = 1`, with `extra` trailing variables left at 0.
    fn combination_lp(&self, q: &[BigRational], extra: usize) -> LinearProgram {
        let k = self.points.len();
        let mut lp = LinearProgram::new(k + extra);
        for (axis, target) in q.iter().enumerate() {
            let mut row: Vec<BigRational> = self.points.iter().map(|p| rat(p[axis])).collect();
            row.resize(k + extra, BigRational::zero());
            lp.add_constraint(Constraint::new(row, Relation::Eq, target.clone()))
                .expect("row length matches");
        }
        let mut ones = vec![rat(1); k];
        ones.resize(k + extra, BigRational::zero());
        lp.add_constraint(Constraint::new(ones, Relation::Eq, rat(1)))
            .expect("row length matches");
        lp
    }

    /// `q` lies in the convex hull.
    pub fn contains(&self, q: &[BigRational]) -> Result<bool> {
        self.check_query(q)?;
        Ok(self.combination_lp(q, 0).solve()?.status != LpStatus::Infeasible)
    }

    /// `q` is a strictly positive convex combination of all points.
    pub fn in_relative_interior(&self, q: &[BigRational]) -> Result<bool> {
        self.check_query(q)?;
        let k = self.points.len();
        let mut lp = self.combination_lp(q, 1);
        lp.set_free(k);
        for i in 0..k {
            let mut row = vec![BigRational::zero(); k + 1];
            row[i] = rat(1);
            row[k] = rat(-1);
            lp.add_constraint(Constraint::new(row, Relation::Ge, BigRational::zero()))?;
        }
        let mut obj = vec![BigRational::zero(); k + 1];
        obj[k] = rat(1);
        lp.maximize(obj)?;
        let res = lp.solve()?;
        Ok(match res.status {
            LpStatus::Optimal => res.objective.expect("optimal has a value").is_positive(),
            LpStatus::Infeasible => false,
            other => return Err(Error::Internal(format!("relative-interior LP ended {other:?}"))),
        })
    }

    /// Indices `i` admitting `sum_j c_j s_j = 0` with `c >= 0` and `c_i > 0`.
    pub fn essential_support(&self) -> Result<BTreeSet<usize>> {
        let k = self.points.len();
        let mut essential = BTreeSet::new();
        let mut settled = vec![false; k];
        for i in 0..k {
            if settled[i] {
                continue;
            }
            let mut lp = LinearProgram::new(k);
            for axis in 0..self.dim {
                let row = self.points.iter().map(|p| rat(p[axis])).collect();
                lp.add_constraint(Constraint::new(row, Relation::Eq, BigRational::zero()))?;
            }
            let mut pin = vec![BigRational::zero(); k];
            pin[i] = rat(1);
            lp.add_constraint(Constraint::new(pin, Relation::Ge, rat(1)))?;
            let res = lp.solve()?;
            settled[i] = true;
            if res.status == LpStatus::Infeasible {
                continue;
            }
            // any feasible combination certifies every index it uses
            for (j, c) in res.witness.iter().enumerate() {
                if c.is_positive() {
                    essential.insert(j);
                    settled[j] = true;
                }
            }
        }
        Ok(essential)
    }

    /// Dimension of the affine hull; `-1` for the empty set.
    pub fn affine_dimension(&self) -> i64 {
        let Some(base) = self.points.first() else {
            return -1;
        };
        let q = FieldSpec::rationals();
        let rows = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| q.from_i64(a - b)).collect())
            .collect::<Vec<_>>();
        if rows.is_empty() {
            return 0;
        }
        Matrix::from_rows(q, rows).expect("uniform rows").rank() as i64
    }

    /// Dimension of the linear span.
    pub fn linear_dimension(&self) -> usize {
        if self.points.is_empty() {
            return 0;
        }
        let q = FieldSpec::rationals();
        let rows = self
            .points
            .iter()
            .map(|p| p.iter().map(|&a| q.from_i64(a)).collect())
            .collect();
        Matrix::from_rows(q, rows).expect("uniform rows").rank()
    }
}

pub fn origin(dim: usize) -> Vec<BigRational> {
    vec![BigRational::zero(); dim]
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Subset enumeration with exact barycentric solves.

    use super::*;
    use crate::field::Scalar;

    fn subsets(k: usize, max: usize) -> Vec<Vec<usize>> {
        (1u32..(1 << k))
            .map(|mask| (0..k).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|s| s.len() <= max)
            .collect()
    }

    /// Barycentric coordinates of `q` over an affinely independent subset, if it spans `q`.
    fn barycentric(s: &PointSet, idx: &[usize], q: &[BigRational]) -> Option<Vec<BigRational>> {
        let f = FieldSpec::rationals();
        let m = s.dim;
        let mut rows: Vec<Vec<Scalar>> = (0..m)
            .map(|axis| idx.iter().map(|&i| f.from_i64(s.points[i][axis])).collect())
            .collect();
        rows.push(idx.iter().map(|_| f.one()).collect());
        let a = Matrix::from_rows(f, rows).ok()?;
        if a.rank() != idx.len() {
            return None;
        }
        let mut b: Vec<Scalar> = q.iter().map(|v| Scalar::Rational(v.clone())).collect();
        b.push(f.one());
        let sol = a.solve(&b)?;
        Some(sol.into_iter().map(|s| s.as_rational().unwrap().clone()).collect())
    }

    pub fn contains(s: &PointSet, q: &[BigRational]) -> bool {
        subsets(s.len(), s.dim + 1).into_iter().any(|idx| {
            barycentric(s, &idx, q).is_some_and(|c| c.iter().all(|v| !v.is_negative()))
        })
    }

    /// `q` is in the relative interior iff every point carries positive weight in
    /// some basic representation (the representations form a polytope whose
    /// vertices are the basic ones).
    pub fn in_relative_interior(s: &PointSet, q: &[BigRational]) -> bool {
        let mut covered = vec![false; s.len()];
        let mut any = false;
        for idx in subsets(s.len(), s.dim + 1) {
            if let Some(c) = barycentric(s, &idx, q) {
                if c.iter().all(|v| !v.is_negative()) {
                    any = true;
                    for (j, v) in idx.iter().zip(&c) {
                        if v.is_positive() {
                            covered[*j] = true;
                        }
                    }
                }
            }
        }
        any && covered.iter().all(|&c| c)
    }

    /// Circuits with strictly positive kernel vectors witness essential indices.
    pub fn essential_support(s: &PointSet) -> BTreeSet<usize> {
        let f = FieldSpec::rationals();
        let mut out = BTreeSet::new();
        for idx in subsets(s.len(), s.dim + 1) {
            let rows: Vec<Vec<Scalar>> = (0..s.dim)
                .map(|axis| idx.iter().map(|&i| f.from_i64(s.points[i][axis])).collect())
                .collect();
            let kernel = if s.dim == 0 {
                vec![vec![f.one(); idx.len()]]
            } else {
                Matrix::from_rows(f, rows).unwrap().kernel()
            };
            if kernel.len() != 1 {
                continue;
            }
            let v = &kernel[0];
            let pos = v.iter().all(|x| x.as_rational().unwrap().is_positive());
            let neg = v.iter().all(|x| x.as_rational().unwrap().is_negative());
            if pos || neg {
                out.extend(idx.iter().copied());
            }
        }
        out
    }
}
