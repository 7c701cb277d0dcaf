//! Independent oracles for integration tests: dense rational elimination,
//! subset enumeration for polytopes, brute-force tableaux and monomial
//! expansions of symmetric functions.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use polystab::field::FieldSpec;
use polystab::poly::{Monomial, Polynomial};

pub fn r(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Row-reduces `a` in place; returns the pivot columns.
fn rref(a: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][c].recip();
        for v in a[row].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != row && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &a[row][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut a = rows.to_vec();
    rref(&mut a).len()
}

/// Unique solution of `a x = b` when the columns of `a` are independent.
fn solve_unique(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = a[0].len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| row.iter().cloned().chain(std::iter::once(v.clone())).collect())
        .collect();
    let piv = rref(&mut aug);
    if piv.len() != cols || piv.contains(&cols) {
        return None;
    }
    Some((0..cols).map(|c| aug[c][cols].clone()).collect())
}

/// Kernel of `a` when it is one-dimensional.
fn kernel_line(a: &[Vec<BigRational>], cols: usize) -> Option<Vec<BigRational>> {
    let mut m = a.to_vec();
    let piv = rref(&mut m);
    if piv.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !piv.contains(c))?;
    let mut v = vec![BigRational::zero(); cols];
    v[free] = BigRational::one();
    for (row, &p) in piv.iter().enumerate() {
        v[p] = -m[row][free].clone();
    }
    Some(v)
}

fn subsets(k: usize, max: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1u32 << k))
        .map(move |mask| (0..k).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(move |s| s.len() <= max)
}

/// Barycentric coordinates of `q` over the subset, when the subset is affinely
/// independent and spans `q`.
fn barycentric(points: &[Vec<i64>], idx: &[usize], q: &[BigRational]) -> Option<Vec<BigRational>> {
    let dim = q.len();
    let mut a: Vec<Vec<BigRational>> = (0..dim).map(|ax| idx.iter().map(|&i| r(points[i][ax])).collect()).collect();
    a.push(idx.iter().map(|_| BigRational::one()).collect());
    let mut b = q.to_vec();
    b.push(BigRational::one());
    solve_unique(&a, &b)
}

/// `(in convex hull, in relative interior)` by subset enumeration.
pub fn hull_position(points: &[Vec<i64>], q: &[BigRational]) -> (bool, bool) {
    let mut covered = vec![false; points.len()];
    let mut inside = false;
    for idx in subsets(points.len(), q.len() + 1) {
        if let Some(c) = barycentric(points, &idx, q) {
            if c.iter().all(|v| !v.is_negative()) {
                inside = true;
                for (&j, v) in idx.iter().zip(&c) {
                    if v.is_positive() {
                        covered[j] = true;
                    }
                }
            }
        }
    }
    (inside, inside && covered.iter().all(|&c| c))
}

/// Index `i` is essential iff it lies on a circuit with a positive relation.
pub fn essential_by_index(points: &[Vec<i64>], dim: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for i in 0..points.len() {
        let hit = subsets(points.len(), dim + 1).filter(|s| s.contains(&i)).any(|idx| {
            if dim == 0 {
                return true;
            }
            let a: Vec<Vec<BigRational>> =
                (0..dim).map(|ax| idx.iter().map(|&j| r(points[j][ax])).collect()).collect();
            kernel_line(&a, idx.len()).is_some_and(|v| {
                v.iter().all(|x| x.is_positive()) || v.iter().all(|x| x.is_negative())
            })
        });
        if hit {
            out.insert(i);
        }
    }
    out
}

pub fn affine_dimension(points: &[Vec<i64>]) -> i64 {
    let Some(base) = points.first() else { return -1 };
    let rows: Vec<Vec<BigRational>> =
        points[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| r(a - b)).collect()).collect();
    if rows.is_empty() {
        0
    } else {
        rank(&rows) as i64
    }
}

pub type Dense = BTreeMap<Vec<u32>, BigInt>;

pub fn to_poly(d: &Dense, n: usize, field: FieldSpec) -> Polynomial {
    Polynomial::from_terms(
        n,
        field,
        d.iter().map(|(e, c)| (Monomial::new(e.clone()), field.from_bigint(c))),
    )
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn compositions(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=d)
        .flat_map(|a| {
            compositions(n - 1, d - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

/// `e_k`, `h_k`, `p_k` by direct enumeration of exponent vectors.
pub fn e_k(k: u32, n: usize) -> Dense {
    compositions(n, k).into_iter().filter(|e| e.iter().all(|&a| a <= 1)).map(|e| (e, BigInt::one())).collect()
}

pub fn h_k(k: u32, n: usize) -> Dense {
    compositions(n, k).into_iter().map(|e| (e, BigInt::one())).collect()
}

pub fn p_k(k: u32, n: usize) -> Dense {
    if k == 0 {
        return [(vec![0; n], BigInt::from(n))].into_iter().collect();
    }
    (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = k;
            (e, BigInt::one())
        })
        .collect()
}

pub fn product(parts: &[u32], n: usize, one: impl Fn(u32, usize) -> Dense) -> Dense {
    parts.iter().fold([(vec![0; n], BigInt::one())].into_iter().collect(), |acc, &k| mul(&acc, &one(k, n)))
}

/// `s_lambda` as the generating function of semistandard tableaux.
pub fn schur_ssyt(shape: &[u32], n: usize) -> Dense {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(i, &len)| (0..len as usize).map(move |j| (i, j)))
        .collect();
    let mut out = Dense::new();
    let mut fill: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    fn go(k: usize, cells: &[(usize, usize)], n: usize, fill: &mut BTreeMap<(usize, usize), usize>, out: &mut Dense) {
        if k == cells.len() {
            let mut e = vec![0u32; n];
            for v in fill.values() {
                e[*v] += 1;
            }
            *out.entry(e).or_insert_with(BigInt::zero) += 1;
            return;
        }
        let (i, j) = cells[k];
        let lo_row = if j > 0 { fill[&(i, j - 1)] } else { 0 };
        let lo_col = if i > 0 { fill[&(i - 1, j)] + 1 } else { 0 };
        for v in lo_row.max(lo_col)..n {
            fill.insert((i, j), v);
            go(k + 1, cells, n, fill, out);
            fill.remove(&(i, j));
        }
    }
    go(0, &cells, n, &mut fill, &mut out);
    out
}

/// Standard fillings of `outer / inner` counted over all permutations.
pub fn syt_brute_force(outer: &[u32], inner: &[u32]) -> u64 {
    let cells: Vec<(usize, usize)> = outer
        .iter()
        .enumerate()
        .flat_map(|(i, &len)| {
            let start = inner.get(i).copied().unwrap_or(0) as usize;
            (start..len as usize).map(move |j| (i, j))
        })
        .collect();
    let k = cells.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut count = 0;
    let mut valid = |p: &[usize]| {
        let at: BTreeMap<(usize, usize), usize> = cells.iter().copied().zip(p.iter().copied()).collect();
        let ok = cells.iter().all(|&(i, j)| {
            let v = at[&(i, j)];
            at.get(&(i, j + 1)).is_none_or(|&w| w > v) && at.get(&(i + 1, j)).is_none_or(|&w| w > v)
        });
        if ok {
            count += 1;
        }
    };
    fn heap(m: usize, p: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if m <= 1 {
            f(p);
            return;
        }
        for i in 0..m - 1 {
            heap(m - 1, p, f);
            if m.is_multiple_of(2) {
                p.swap(i, m - 1);
            } else {
                p.swap(0, m - 1);
            }
        }
        heap(m - 1, p, f);
    }
    heap(k, &mut perm, &mut valid);
    count
}

/// All partitions of `d`, parts in decreasing order.
pub fn partitions(d: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// Sub-partitions of `outer`, including the empty one.
pub fn contained(outer: &[u32]) -> Vec<Vec<u32>> {
    fn go(i: usize, outer: &[u32], cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == outer.len() {
            let mut v = cur.clone();
            while v.last() == Some(&0) {
                v.pop();
            }
            out.push(v);
            return;
        }
        for a in 0..=outer[i].min(cap) {
            cur.push(a);
            go(i + 1, outer, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, outer, u32::MAX, &mut Vec::new(), &mut out);
    out
}
