//! Buchberger's algorithm in degrevlex, Krull dimension of the initial ideal,
//! and stabilizer dimensions for `SL_n` acting on forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Matrix;
use crate::poly::{Monomial, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerLimits {
    pub max_basis: usize,
    pub max_degree: u32,
    /// S-pairs reduced before giving up.
    pub max_pairs: usize,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_basis: 5000,
            max_degree: 40,
            max_pairs: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    field: FieldSpec,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(nvars: usize, field: FieldSpec, generators: Vec<Polynomial>) -> Result<Self> {
        if generators.iter().any(|g| g.nvars() != nvars || g.field() != field) {
            return Err(Error::Dimension("generators live in different rings".into()));
        }
        Ok(Ideal {
            nvars,
            field,
            generators,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }
}

/// Reduced, monic, sorted by increasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    field: FieldSpec,
    basis: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].total_degree() == Some(0)
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis
            .iter()
            .map(|g| g.leading().expect("basis elements are nonzero").0.clone())
            .collect()
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, &self.basis.iter().collect::<Vec<_>>())
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    /// Largest set of variables carrying no leading monomial; `-1` for the unit ideal.
    pub fn krull_dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let masks: Vec<u64> = self.leading_monomials().iter().map(support_mask).collect();
        max_independent(self.nvars, &masks) as i64
    }
}

fn support_mask(m: &Monomial) -> u64 {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0u64, |acc, (i, _)| acc | (1 << i))
}

/// Size of the largest variable set containing no mask entirely.
fn max_independent(nvars: usize, masks: &[u64]) -> usize {
    fn go(i: usize, nvars: usize, chosen: u64, size: usize, masks: &[u64], best: &mut usize) {
        if size + (nvars - i) <= *best {
            return;
        }
        if i == nvars {
            *best = size;
            return;
        }
        let with = chosen | (1 << i);
        if masks.iter().all(|&m| m & !with != 0) {
            go(i + 1, nvars, with, size + 1, masks, best);
        }
        go(i + 1, nvars, chosen, size, masks, best);
    }
    let mut best = 0;
    if masks.contains(&0) {
        return 0;
    }
    go(0, nvars, 0, 0, masks, &mut best);
    best
}

/// Full reduction of `f` modulo `g` (leading terms first, then the tail).
fn normal_form(f: &Polynomial, g: &[&Polynomial]) -> Polynomial {
    let leads: Vec<(Monomial, crate::field::Scalar)> = g
        .iter()
        .map(|p| {
            let (m, c) = p.leading().expect("nonzero divisor");
            (m.clone(), c.inverse().expect("nonzero leading coefficient"))
        })
        .collect();
    let mut p = f.clone();
    let mut rest = Polynomial::zero(f.nvars(), f.field());
    while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let q = leads[k].0.quotient_of(&m).expect("divides");
                p.sub_scaled_shifted(&(&c * &leads[k].1), &q, g[k]);
            }
            None => {
                p.add_term(m.clone(), -&c);
                rest.add_term(m, c);
            }
        }
    }
    rest
}

fn s_polynomial(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (ma, ca) = a.leading().expect("nonzero");
    let (mb, cb) = b.leading().expect("nonzero");
    let l = ma.lcm(mb);
    let mut s = a.shift(&ma.quotient_of(&l).expect("divides")).scale(&ca.inverse().expect("nonzero"));
    s.sub_scaled_shifted(&cb.inverse().expect("nonzero"), &mb.quotient_of(&l).expect("divides"), b);
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

impl Pair {
    fn key(&self) -> (u32, u32, &Monomial, usize, usize) {
        (self.lcm.degree(), self.sugar, &self.lcm, self.i, self.j)
    }
}

struct Engine {
    polys: Vec<Polynomial>,
    sugar: Vec<u32>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    limits: GroebnerLimits,
}

impl Engine {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading().expect("nonzero").0
    }

    fn make_pair(&self, i: usize, j: usize) -> Pair {
        let lcm = self.lm(i).lcm(self.lm(j));
        let si = self.sugar[i] + lcm.degree() - self.lm(i).degree();
        let sj = self.sugar[j] + lcm.degree() - self.lm(j).degree();
        Pair {
            i: i.min(j),
            j: i.max(j),
            lcm,
            sugar: si.max(sj),
        }
    }

    /// Gebauer–Möller update after adding polynomial `h`.
    fn update(&mut self, h: usize) {
        let lm_h = self.lm(h).clone();
        let mut c: Vec<Pair> = self.active.iter().map(|&g| self.make_pair(h, g)).collect();
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = c.pop() {
            let other = if p.i == h { p.j } else { p.i };
            let coprime = lm_h.is_coprime(self.lm(other));
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|p| {
                let other = if p.i == h { p.j } else { p.i };
                !lm_h.is_coprime(self.lm(other))
            })
            .collect();
        let old = std::mem::take(&mut self.pairs);
        self.pairs = old
            .into_iter()
            .filter(|p| {
                !(lm_h.divides(&p.lcm)
                    && lm_h.lcm(self.lm(p.i)) != p.lcm
                    && lm_h.lcm(self.lm(p.j)) != p.lcm)
            })
            .collect();
        self.pairs.extend(e);
        let active = std::mem::take(&mut self.active);
        self.active = active.into_iter().filter(|&g| !lm_h.divides(self.lm(g))).collect();
        self.active.push(h);
    }

    fn push(&mut self, p: Polynomial, sugar: u32) -> Result<usize> {
        if p.total_degree().unwrap_or(0) > self.limits.max_degree {
            return Err(Error::Inconclusive(format!(
                "Groebner degree cap {} exceeded",
                self.limits.max_degree
            )));
        }
        if self.active.len() >= self.limits.max_basis {
            return Err(Error::Inconclusive(format!(
                "Groebner basis cap {} exceeded",
                self.limits.max_basis
            )));
        }
        self.polys.push(p.monic());
        self.sugar.push(sugar);
        Ok(self.polys.len() - 1)
    }
}

pub fn buchberger(ideal: &Ideal, limits: GroebnerLimits) -> Result<GroebnerBasis> {
    let unit = || GroebnerBasis {
        nvars: ideal.nvars,
        field: ideal.field,
        basis: vec![Polynomial::one(ideal.nvars, ideal.field)],
    };
    let mut gens: Vec<&Polynomial> = ideal.generators.iter().filter(|g| !g.is_zero()).collect();
    gens.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    let mut eng = Engine {
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        limits,
    };
    for g in gens {
        let current: Vec<&Polynomial> = eng.active.iter().map(|&i| &eng.polys[i]).collect();
        let h = if current.is_empty() { g.clone() } else { normal_form(g, &current) };
        if h.is_zero() {
            continue;
        }
        if h.total_degree() == Some(0) {
            return Ok(unit());
        }
        let sugar = g.total_degree().unwrap_or(0);
        let idx = eng.push(h, sugar)?;
        eng.update(idx);
    }
    let mut reduced = 0usize;
    while !eng.pairs.is_empty() {
        reduced += 1;
        if reduced > limits.max_pairs {
            return Err(Error::Inconclusive(format!("Groebner pair cap {} exceeded", limits.max_pairs)));
        }
        let best = (0..eng.pairs.len())
            .min_by(|&a, &b| eng.pairs[a].key().cmp(&eng.pairs[b].key()))
            .expect("nonempty");
        let pair = eng.pairs.swap_remove(best);
        let s = s_polynomial(&eng.polys[pair.i], &eng.polys[pair.j]);
        let current: Vec<&Polynomial> = eng.active.iter().map(|&i| &eng.polys[i]).collect();
        let h = normal_form(&s, &current);
        if h.is_zero() {
            continue;
        }
        if h.total_degree() == Some(0) {
            return Ok(unit());
        }
        let idx = eng.push(h, pair.sugar)?;
        eng.update(idx);
    }
    let basis = interreduce(eng.active.iter().map(|&i| eng.polys[i].clone()).collect());
    let gb = GroebnerBasis {
        nvars: ideal.nvars,
        field: ideal.field,
        basis,
    };
    verify(&gb, ideal)?;
    Ok(gb)
}

/// Minimal, reduced, monic, sorted.
fn interreduce(mut polys: Vec<Polynomial>) -> Vec<Polynomial> {
    polys.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for p in polys {
        let lm = p.leading().unwrap().0.clone();
        if !minimal.iter().any(|q| q.leading().unwrap().0.divides(&lm)) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q)
            .collect();
        let (lm, lc) = minimal[i].leading().unwrap();
        let mut tail = minimal[i].clone();
        tail.add_term(lm.clone(), -lc);
        let mut r = normal_form(&tail, &others);
        r.add_term(lm.clone(), lc.clone());
        out.push(r.monic());
    }
    out
}

/// Every generator reduces to zero and every non-coprime S-pair reduces to zero.
fn verify(gb: &GroebnerBasis, ideal: &Ideal) -> Result<()> {
    let refs: Vec<&Polynomial> = gb.basis.iter().collect();
    for g in &ideal.generators {
        if !normal_form(g, &refs).is_zero() {
            return Err(Error::Internal("a generator does not reduce to zero".into()));
        }
    }
    for i in 0..refs.len() {
        for j in i + 1..refs.len() {
            if refs[i].leading().unwrap().0.is_coprime(refs[j].leading().unwrap().0) {
                continue;
            }
            if !normal_form(&s_polynomial(refs[i], refs[j]), &refs).is_zero() {
                return Err(Error::Internal("an S-polynomial does not reduce to zero".into()));
            }
        }
    }
    Ok(())
}

/// Generators of `{g : f(g x) = f(x), det g = 1}` in the variables `g_ij`
/// (row-major, index `i * n + j`), where `x_j` is replaced by `sum_i g_ij x_i`.
pub fn stabilizer_ideal(f: &Polynomial) -> Result<Ideal> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = f.nvars();
    let field = f.field();
    let gv = n * n;
    let total = gv + n;
    let images: Vec<Polynomial> = (0..n)
        .map(|i| {
            (0..n).fold(Polynomial::zero(total, field), |acc, j| {
                let gji = Polynomial::var(total, field, j * n + i);
                &acc + &(&gji * &Polynomial::var(total, field, gv + j))
            })
        })
        .collect();
    let moved = f.substitute(&images)?;
    let diff = &moved - &f.embed(total, gv);
    let mut generators: Vec<Polynomial> = diff.split_leading_vars(gv).into_values().collect();
    generators.push(&symbolic_determinant(n, field) - &Polynomial::one(gv, field));
    Ideal::new(gv, field, generators)
}

fn symbolic_determinant(n: usize, field: FieldSpec) -> Polynomial {
    fn go(row: usize, used: &mut Vec<bool>, n: usize, field: FieldSpec) -> Polynomial {
        if row == n {
            return Polynomial::one(n * n, field);
        }
        let mut acc = Polynomial::zero(n * n, field);
        let mut sign_pos = true;
        for c in 0..n {
            if used[c] {
                continue;
            }
            used[c] = true;
            let term = &Polynomial::var(n * n, field, row * n + c) * &go(row + 1, used, n, field);
            used[c] = false;
            acc = if sign_pos { &acc + &term } else { &acc - &term };
            sign_pos = !sign_pos;
        }
        acc
    }
    go(0, &mut vec![false; n], n, field)
}

/// Dimension of `{X in sl_n : sum X_ij x_i df/dx_j = 0}` over the field of `f`.
pub fn lie_kernel_dim(f: &Polynomial) -> usize {
    let n = f.nvars();
    if n == 0 {
        return 0;
    }
    let field = f.field();
    let partials: Vec<Polynomial> = (0..n).map(|j| f.derivative(j)).collect();
    let x = |i: usize| Polynomial::var(n, field, i);
    let mut columns: Vec<Polynomial> = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                columns.push(&x(i) * &partials[j]);
            }
        }
    }
    for i in 0..n - 1 {
        columns.push(&(&x(i) * &partials[i]) - &(&x(n - 1) * &partials[n - 1]));
    }
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for c in &columns {
        for m in c.support() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    if index.is_empty() {
        return n * n - 1;
    }
    let mut rows = vec![vec![field.zero(); columns.len()]; index.len()];
    for (k, c) in columns.iter().enumerate() {
        for (m, v) in c.terms() {
            rows[index[m]][k] = v.clone();
        }
    }
    let rank = Matrix::from_rows(field, rows).expect("uniform rows").rank();
    n * n - 1 - rank
}

/// Characteristic-zero Lie algebra route.
pub fn lie_stabilizer_dim(f: &Polynomial) -> Result<usize> {
    if !f.field().is_rational() {
        return Err(Error::UnsupportedCharacteristic(format!(
            "Lie algebra stabilizer dimension needs characteristic 0, got {}",
            f.field()
        )));
    }
    Ok(lie_kernel_dim(f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabMethod {
    /// Exact in characteristic 0.
    LieAlgebra,
    /// A zero Lie kernel bounds the group dimension by 0.
    LieBound,
    Groebner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabDim {
    pub dim: usize,
    pub method: StabMethod,
}

/// Dimension of the stabilizer of `f` in `SL_n`.
pub fn stabilizer_dim(f: &Polynomial, limits: GroebnerLimits) -> Result<StabDim> {
    let lie = lie_kernel_dim(f);
    if f.field().is_rational() {
        return Ok(StabDim {
            dim: lie,
            method: StabMethod::LieAlgebra,
        });
    }
    if lie == 0 {
        return Ok(StabDim {
            dim: 0,
            method: StabMethod::LieBound,
        });
    }
    groebner_stabilizer_dim(f, limits).map(|dim| StabDim {
        dim,
        method: StabMethod::Groebner,
    })
}

pub fn groebner_stabilizer_dim(f: &Polynomial, limits: GroebnerLimits) -> Result<usize> {
    let gb = buchberger(&stabilizer_ideal(f)?, limits)?;
    let d = gb.krull_dimension();
    if d < 0 {
        return Err(Error::Internal("stabilizer ideal is the unit ideal".into()));
    }
    Ok(d as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDimTest {
    pub equal: bool,
    pub dim_f: StabDim,
    pub dim_w: StabDim,
}

/// Equal stabilizer dimensions for `f` and a point `w` of its orbit closure.
pub fn same_orbit_dim_test(f: &Polynomial, w: &Polynomial, limits: GroebnerLimits) -> Result<OrbitDimTest> {
    if f.nvars() != w.nvars() || f.field() != w.field() {
        return Err(Error::Dimension("f and w live in different rings".into()));
    }
    let dim_f = stabilizer_dim(f, limits)?;
    let dim_w = if w == f { dim_f } else { stabilizer_dim(w, limits)? };
    Ok(OrbitDimTest {
        equal: dim_f.dim == dim_w.dim,
        dim_f,
        dim_w,
    })
}
